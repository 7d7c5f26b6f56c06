// Unit tests for the robust cooperative-jamming design.  References: the
// null-steering closed form, the single-ray reduction at two helper
// antennas, the convex trust-region dual for the jammer mismatch, the
// perfect-estimate dominant pencils, and ball-sampling searches; none of
// them share code with the solvers under test.

#include "doctest.h"
#include "wiretap/model.hpp"
#include "wiretap/robust_cj.hpp"
#include "wiretap/robust_dt.hpp"
#include "wiretap/rng.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

using namespace wiretap;

namespace {

SystemParams desk_params(double power_db, double eps_sq, int n = 4) {
  SystemParams p;
  p.n_a = n;
  p.n_h = n;
  p.sigma_sq = 1.0;
  p.p_s = db_to_linear(power_db);
  p.p_j = p.p_s;
  p.eps_h_sq = eps_sq;
  p.eps_g_sq = eps_sq;
  return p;
}

HermitianMatrix random_psd(Rng& rng, int n, double trace_cap) {
  HermitianMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
  HermitianMatrix q = hermitize(m * m.adjoint());
  return q * (trace_cap * (0.25 + 0.75 * rng.uniform()) / q.trace().real());
}

}  // namespace

TEST_CASE("null steering cancels the receiver channel at maximal gain") {
  SystemParams params = desk_params(5.0, 0.0);
  const ChannelSet ch = sample_channels(params, 1100);

  const ComplexVector w = null_steering(ch.g_b, ch.g_e_est);
  CHECK(std::abs((ch.g_b * w.adjoint())(0, 0)) <= 1e-12);
  CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // No sampled unit vector in the zero-forcing subspace beats its gain.
  const double gain = std::abs((ch.g_e_est * w.adjoint())(0, 0));
  const HermitianMatrix proj = null_projector(ch.g_b);
  Rng rng(4242);
  double best_sampled = 0.0;
  for (int i = 0; i < 100000; ++i) {
    ComplexVector cand(params.n_h);
    for (int k = 0; k < params.n_h; ++k) cand(k) = rng.complex_normal();
    const ComplexVector z = cand * proj;
    if (z.norm() < 1e-9) continue;
    best_sampled =
        std::max(best_sampled, std::abs((ch.g_e_est * z.adjoint())(0, 0)) /
                                   z.norm());
  }
  CHECK(best_sampled <= gain + 1e-9);
  CHECK(best_sampled >= 0.9 * gain);  // the sampler did explore the subspace

  const ComplexVector parallel = std::complex<double>(0.7, -0.4) * ch.g_b;
  CHECK_THROWS_AS((void)null_steering(ch.g_b, parallel),
                  std::invalid_argument);
}

TEST_CASE("rank-one verification thresholds the eigenvalue ratio") {
  CHECK_FALSE(verify_rank_one(HermitianMatrix::Zero(3, 3), 1e-6));

  ComplexVector w(2);
  w << std::complex<double>(0.6, 0.0), std::complex<double>(0.0, 0.8);
  CHECK(verify_rank_one(hermitize(w.adjoint() * w), 1e-12));

  HermitianMatrix d = HermitianMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2e-6;
  CHECK_FALSE(verify_rank_one(d, 1e-6));
  CHECK(verify_rank_one(d, 3e-6));
  d(1, 1) = 1.0;
  CHECK_FALSE(verify_rank_one(d, 1e-6));
}

TEST_CASE("zero-radius jamming design is full-power null steering") {
  SystemParams params = desk_params(5.0, 0.0);
  for (int trial = 0; trial < 6; ++trial) {
    const ChannelSet ch = sample_channels(params, 1200 + trial);
    const JammingDesign jd = solve_robust_jamming(ch, params);
    REQUIRE(jd.status == SolveStatus::optimal);

    const HermitianMatrix proj = null_projector(ch.g_b);
    const double expect = params.p_j * quad_form(ch.g_e_est, proj);
    CHECK(jd.objective == doctest::Approx(expect).epsilon(1e-6));
    CHECK(quad_form(ch.g_e_est, jd.q_z) ==
          doctest::Approx(expect).epsilon(1e-6));
    CHECK(jd.q_z.trace().real() == doctest::Approx(params.p_j).epsilon(1e-6));
    CHECK(verify_rank_one(jd.q_z, 1e-6));
    CHECK(quad_form(ch.g_b, jd.q_z) <= 1e-8);
  }

  // Estimate parallel to the receiver channel: nothing survives zero forcing.
  ChannelSet ch = sample_channels(params, 1250);
  ch.g_e_est = std::complex<double>(0.7, -0.4) * ch.g_b;
  const JammingDesign jd = solve_robust_jamming(ch, params);
  REQUIRE(jd.status == SolveStatus::optimal);
  CHECK(jd.objective <= 1e-8);
}

TEST_CASE("two-antenna jamming design matches the single-ray oracle") {
  SystemParams params = desk_params(5.0, 0.5, 2);
  const double eps = std::sqrt(params.eps_g_sq);
  for (int trial = 0; trial < 3; ++trial) {
    const ChannelSet ch = sample_channels(params, 1300 + trial);
    const JammingDesign jd = solve_robust_jamming(ch, params);
    REQUIRE(jd.status == SolveStatus::optimal);

    // With two helper antennas the zero-forcing cone is the single ray
    // s v^H v, the worst mismatch steals at most eps of the amplitude, and
    // power helps monotonically: worst case = p_j * max(0, |g~ v^H| - eps)^2.
    const ComplexVector v = null_steering(ch.g_b, ch.g_e_est);
    const double amp = std::abs((ch.g_e_est * v.adjoint())(0, 0));
    const double closed =
        params.p_j * std::pow(std::max(0.0, amp - eps), 2);
    CHECK(std::abs(jd.objective - closed) <= 0.02 * (0.05 + closed));

    // Grid over the ray with sampled worst mismatches.
    double best = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double s = params.p_j * i / 40.0;
      const HermitianMatrix q = s * hermitize(v.adjoint() * v);
      const MismatchProbe probe =
          worst_mismatch_sampled(MismatchObjective::minimize_jamming,
                                 ch.g_e_est, eps, q, 20000, 99 + i);
      best = std::max(best, probe.value);
    }
    CHECK(std::abs(jd.objective - best) <= 0.02 * (0.05 + best));
  }
}

TEST_CASE("worst jammer mismatch: duality, dominance, and closed forms") {
  Rng rng(777);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 3 + (trial % 2);
    ComplexVector g(n);
    for (int k = 0; k < n; ++k) g(k) = rng.complex_normal();
    const HermitianMatrix q = random_psd(rng, n, 3.0);
    const double eps_sq = 0.3 + 0.4 * rng.uniform();

    const WorstMismatchCj wm = worst_mismatch_cj(q, g, eps_sq);
    CHECK(wm.e.norm() <= std::sqrt(eps_sq) + 1e-9);
    CHECK(std::abs(wm.gamma - wm.value) <= 1e-5 * (1.0 + std::abs(wm.value)));
    const MismatchProbe probe =
        worst_mismatch_sampled(MismatchObjective::minimize_jamming, g,
                               std::sqrt(eps_sq), q, 4000, 31 * trial + 1);
    CHECK(wm.value <= probe.value + 1e-6);
  }

  // Isotropic covariance: the minimizer backs straight away from the
  // estimate, stopping at the ball edge or at full cancellation.
  {
    ComplexVector g(3);
    g << std::complex<double>(1.0, 0.5), std::complex<double>(-0.3, 0.2),
        std::complex<double>(0.0, -1.1);
    const double qv = 1.7;
    const HermitianMatrix q = qv * HermitianMatrix::Identity(3, 3);

    const WorstMismatchCj edge = worst_mismatch_cj(q, g, 0.25);
    const ComplexVector expect = -(0.5 / g.norm()) * g;
    CHECK((edge.e - expect).norm() <= 1e-5);
    CHECK(edge.value ==
          doctest::Approx(qv * std::pow(g.norm() - 0.5, 2)).epsilon(1e-6));

    const WorstMismatchCj inside = worst_mismatch_cj(q, g, 9.0);
    CHECK((inside.e + g).norm() <= 1e-4);
    CHECK(inside.value <= 1e-7);
  }

  // Zero radius: the error vanishes and the dual multiplier diverges.
  {
    ComplexVector g(3);
    g << std::complex<double>(0.3, -0.9), std::complex<double>(1.1, 0.0),
        std::complex<double>(-0.2, 0.4);
    const HermitianMatrix q = random_psd(rng, 3, 2.0);
    const WorstMismatchCj wm = worst_mismatch_cj(q, g, 0.0);
    CHECK(wm.e.norm() == 0.0);
    CHECK(std::isinf(wm.lambda));
    CHECK(wm.value == doctest::Approx(quad_form(g, q)).epsilon(1e-12));
  }

  // Singular covariance whose range component fits inside the ball: the
  // multiplier collapses and the pseudo-inverse branch must cancel it.
  {
    ComplexVector dir(3);
    dir << 1.0, 0.0, 0.0;
    const HermitianMatrix q = 2.0 * hermitize(dir.adjoint() * dir);
    ComplexVector g(3);
    g << std::complex<double>(0.4, 0.0), std::complex<double>(0.0, 0.9),
        std::complex<double>(-0.5, 0.3);
    const WorstMismatchCj wm = worst_mismatch_cj(q, g, 0.25);
    CHECK(wm.lambda <= 1e-5);
    CHECK(wm.value <= 1e-7);
  }
}

TEST_CASE("zero jamming reduces the given-jamming design to direct "
          "transmission") {
  SystemParams params = desk_params(5.0, 1.0);
  const ChannelSet ch = sample_channels(params, 1400);
  const HermitianMatrix qz0 = HermitianMatrix::Zero(params.n_h, params.n_h);

  const SchemeResult cj =
      solve_qx_given_jamming(ch, params, qz0, ComplexVector(), 1e-6);
  const SchemeResult dt = solve_robust_dt(ch, params, 1e-6);
  REQUIRE(cj.status == SolveStatus::optimal);
  REQUIRE(dt.status == SolveStatus::optimal);
  CHECK((cj.q_x - dt.q_x).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(cj.secrecy_rate_bits - dt.secrecy_rate_bits) <= 1e-4);
}

TEST_CASE("perfect estimates: each ratio form matches its own pencil") {
  SystemParams params = desk_params(5.0, 0.0);
  const int n = params.n_a;
  for (int trial = 0; trial < 4; ++trial) {
    const ChannelSet ch = sample_channels(params, 1500 + trial);
    const JammingDesign jd = solve_robust_jamming(ch, params);
    REQUIRE(jd.status == SolveStatus::optimal);
    const double sigma_z_sq =
        params.sigma_sq + quad_form(ch.g_e_est, jd.q_z);

    // Derived form maximizes the true rate: compare against the
    // jamming-aware dominant pencil (noise floors sigma^2 and sigma_z^2).
    const SchemeResult ed =
        solve_qx_given_jamming(ch, params, jd.q_z, ComplexVector(), 1e-6,
                               JammingRatioForm::eve_denominator);
    REQUIRE(ed.status == SolveStatus::optimal);
    PencilPair pencil;
    pencil.a = params.sigma_sq * HermitianMatrix::Identity(n, n) +
               params.p_s * hermitize(ch.h_b.adjoint() * ch.h_b);
    pencil.b = sigma_z_sq * HermitianMatrix::Identity(n, n) +
               params.p_s * hermitize(ch.h_e_est.adjoint() * ch.h_e_est);
    const GenEig ge = max_generalized_eigvec(pencil);
    const double pencil_rate =
        std::max(0.0, std::log2(ge.value * sigma_z_sq / params.sigma_sq));
    CHECK(std::abs(ed.secrecy_rate_bits - pencil_rate) <= 1e-3);

    // Published form maximizes the swapped-constant ratio; certify the
    // design against that objective's own optimum over the covariance set
    // (attained either at a full-power rank-one point or at zero).
    const SchemeResult pr =
        solve_qx_given_jamming(ch, params, jd.q_z, ComplexVector(), 1e-6,
                               JammingRatioForm::numerator_constant);
    REQUIRE(pr.status == SolveStatus::optimal);
    PencilPair swapped;
    swapped.a = sigma_z_sq * HermitianMatrix::Identity(n, n) +
                params.p_s * hermitize(ch.h_b.adjoint() * ch.h_b);
    swapped.b = params.sigma_sq * HermitianMatrix::Identity(n, n) +
                params.p_s * hermitize(ch.h_e_est.adjoint() * ch.h_e_est);
    const GenEig gs = max_generalized_eigvec(swapped);
    const double best_obj =
        std::max(gs.value, sigma_z_sq / params.sigma_sq);
    const double attained =
        (sigma_z_sq + quad_form(ch.h_b, pr.q_x)) /
        (params.sigma_sq + quad_form(ch.h_e_est, pr.q_x));
    CHECK(std::abs(std::log2(best_obj) - std::log2(attained)) <= 1.5e-3);
  }
}

TEST_CASE("cooperative jamming dominates direct transmission at the worst "
          "case") {
  SystemParams params = desk_params(5.0, 1.5);
  double cj_mean = 0.0;
  double dt_mean = 0.0;
  const int n_trials = 100;
  for (int trial = 0; trial < n_trials; ++trial) {
    const ChannelSet ch = sample_channels(params, 1600 + trial);
    const SchemeResult cj = solve_robust_cj(ch, params, 1e-5);
    const SchemeResult dt = solve_robust_dt(ch, params, 1e-5);
    REQUIRE(cj.status == SolveStatus::optimal);
    REQUIRE(dt.status == SolveStatus::optimal);
    CHECK(cj.secrecy_rate_bits >= dt.secrecy_rate_bits - 1e-3);
    cj_mean += cj.secrecy_rate_bits;
    dt_mean += dt.secrecy_rate_bits;
  }
  CHECK(cj_mean / n_trials >= dt_mean / n_trials);
}

TEST_CASE("zero forcing leaves the receiver untouched and budgets hold") {
  SystemParams params = desk_params(10.0, 0.8);
  for (int trial = 0; trial < 4; ++trial) {
    const ChannelSet ch = sample_channels(params, 1700 + trial);
    const JammingDesign jd = solve_robust_jamming(ch, params);
    REQUIRE(jd.status == SolveStatus::optimal);
    CHECK(quad_form(ch.g_b, jd.q_z) <= 1e-8);
    CHECK(jd.q_z.trace().real() <= params.p_j + 1e-7);

    // Receiver SINR is identical with and without the jamming covariance.
    const HermitianMatrix q_x =
        params.p_s * hermitize(ch.h_b.adjoint() * ch.h_b) /
        ch.h_b.squaredNorm();
    const HermitianMatrix qz0 =
        HermitianMatrix::Zero(params.n_h, params.n_h);
    const double with_jam = bob_sinr(ch, q_x, jd.q_z, params.sigma_sq);
    const double without = bob_sinr(ch, q_x, qz0, params.sigma_sq);
    CHECK(std::abs(with_jam - without) <= 1e-7 * without);

    // Certified worst case equals the sampled worst-case jamming power.
    const MismatchProbe probe = worst_mismatch_sampled(
        MismatchObjective::minimize_jamming, ch.g_e_est,
        std::sqrt(params.eps_g_sq), jd.q_z, 100000, 55 + trial);
    CHECK(std::abs(jd.objective - probe.value) <= 0.02 * (1.0 + probe.value));
  }
}
