// Unit tests for the QoS designs (minimize the worst-case eavesdropper SINR
// subject to a receiver SINR floor).  References: a feasibility-sampling
// oracle over random covariances, the closed-form projection beam, an
// exhaustive two-antenna covariance grid with sampled mismatch, the
// reduction of the joint bisection to the estimate-exact program, and the
// bisection's own feasibility certificate.

#include "doctest.h"
#include "wiretap/model.hpp"
#include "wiretap/oracles.hpp"
#include "wiretap/qos.hpp"
#include "wiretap/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace wiretap;

namespace {

SystemParams qos_params(double power_db, double gamma_t, double eps_sq,
                        int n = 4) {
  SystemParams p;
  p.n_a = n;
  p.n_h = n;
  p.sigma_sq = 1.0;
  p.p_total = db_to_linear(power_db);
  p.gamma_t = gamma_t;
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

// A floor between the cost of an exactly zero-forcing beam and the
// full-budget matched beam, so the floor is reachable but perfect nulling is
// not: the minimum leakage is strictly positive and optimization tradeoffs
// are visible.
double tight_floor(const ChannelSet& ch, const SystemParams& p) {
  const HermitianMatrix proj = null_projector(ch.h_e_est);
  const double gain_zf = (proj * ch.h_b.adjoint()).squaredNorm();
  const double gain_mrt = ch.h_b.squaredNorm();
  return 0.5 * (gain_zf + gain_mrt) * p.p_total / p.sigma_sq;
}

}  // namespace

TEST_CASE("no sampled feasible covariance leaks less than the estimate-exact design") {
  Rng rng(4100);
  for (std::uint64_t seed : {4101u, 4102u, 4103u}) {
    SystemParams p = qos_params(10.0, 1.0, 0.0);
    ChannelSet ch = sample_channels(p, seed);
    p.gamma_t = tight_floor(ch, p);

    const SchemeResult sol = solve_qos_dt_nonrobust(ch, p);
    REQUIRE(sol.status == SolveStatus::optimal);
    const double v_star = quad_form(ch.h_e_est, sol.q_x);
    CHECK(sol.bob_metric >= p.gamma_t - 1e-6);

    // Sample the feasible set by blending random covariances toward the
    // full-budget matched beam, which meets the floor strictly.
    const HermitianMatrix q_mrt = p.p_total *
                                  (ch.h_b.adjoint() * ch.h_b) /
                                  ch.h_b.squaredNorm();
    const double target = p.gamma_t * p.sigma_sq;
    int kept = 0;
    for (int s = 0; s < 10000; ++s) {
      const HermitianMatrix q_rand = random_psd(rng, p.n_a, p.p_total);
      const double alpha = rng.uniform();
      const HermitianMatrix q = alpha * q_mrt + (1.0 - alpha) * q_rand;
      if (quad_form(ch.h_b, q) < target) continue;
      ++kept;
      CHECK(quad_form(ch.h_e_est, q) >= v_star - 1e-6 * (1.0 + v_star));
    }
    CHECK(kept > 500);
  }
}

TEST_CASE("the worst-case design collapses to the estimate-exact one without mismatch") {
  SystemParams p = qos_params(10.0, 1.0, 0.0);
  const ChannelSet ch = sample_channels(p, 4200);
  p.gamma_t = tight_floor(ch, p);  // nonzero optimum makes equality visible

  const SchemeResult plain = solve_qos_dt_nonrobust(ch, p);
  REQUIRE(plain.status == SolveStatus::optimal);
  REQUIRE(plain.eve_metric > 1e-3);

  // Exactly zero radius delegates to the estimate-exact program.
  const SchemeResult zero = solve_qos_dt_robust(ch, p);
  CHECK(zero.eve_metric == doctest::Approx(plain.eve_metric).epsilon(1e-9));

  // A vanishing radius exercises the semidefinite program; the worst case
  // over the shrunken ball inflates the leakage by at most O(sqrt(eps^2)).
  SystemParams tiny = p;
  tiny.eps_h_sq = 1e-8;
  const SchemeResult rob = solve_qos_dt_robust(ch, tiny);
  REQUIRE(rob.status == SolveStatus::optimal);
  CHECK(std::abs(rob.eve_metric - plain.eve_metric) <=
        1e-3 * (1.0 + plain.eve_metric));
}

TEST_CASE("worst-case monitoring of both transmit designs stays close at moderate mismatch") {
  // With a mismatch ball of squared radius 0.5, the design that optimizes
  // the worst case and the design that optimizes the estimate should suffer
  // nearly the same worst-case leakage (the certificate only reshuffles
  // power within the low-leakage subspace).
  for (std::uint64_t seed : {4301u, 4302u, 4303u, 4304u}) {
    SystemParams p = qos_params(10.0, 5.0, 0.5);
    const ChannelSet ch = sample_channels(p, seed);
    if (p.gamma_t * p.sigma_sq > p.p_total * ch.h_b.squaredNorm()) continue;
    const SchemeResult rob = solve_qos_dt_robust(ch, p);
    const SchemeResult plain = solve_qos_dt_nonrobust(ch, p);
    REQUIRE(rob.status == SolveStatus::optimal);
    REQUIRE(plain.status == SolveStatus::optimal);
    CHECK(rob.eve_metric <= plain.eve_metric * 1.05 + 1e-9);
    CHECK(plain.eve_metric <= rob.eve_metric * 1.05 + 1e-9);
  }
}

TEST_CASE("two-antenna worst-case design agrees with an exhaustive covariance grid") {
  SystemParams p = qos_params(5.0, 2.0, 0.5, 2);
  const ChannelSet ch = sample_channels(p, 4400);
  REQUIRE(p.gamma_t * p.sigma_sq <= p.p_total * ch.h_b.squaredNorm());
  const SchemeResult rob = solve_qos_dt_robust(ch, p);
  REQUIRE(rob.status == SolveStatus::optimal);

  const double radius = std::sqrt(p.eps_h_sq);
  const double target = p.gamma_t * p.sigma_sq;
  // Maximize the negated worst-case leakage over feasible covariances; the
  // ball extreme comes from the sampling search, not the certificate.
  const auto neg_worst_leak = [&](const HermitianMatrix& q) {
    if (quad_form(ch.h_b, q) < target) return -1e300;
    const MismatchProbe probe =
        worst_mismatch_sampled(MismatchObjective::maximize_eve, ch.h_e_est,
                               radius, q, 2048, 777);
    return -probe.value;
  };
  const oracles::GridResult grid =
      oracles::grid_covariance_search(neg_worst_leak, 2, p.p_total, 12);
  REQUIRE(grid.value > -1e300);

  const double grid_min_leak = -grid.value;
  CHECK(rob.eve_metric * p.sigma_sq ==
        doctest::Approx(grid_min_leak).epsilon(0.02));
}

TEST_CASE("the projection beam meets the floor exactly with zero estimated leakage") {
  for (std::uint64_t seed : {4501u, 4502u, 4503u}) {
    SystemParams p = qos_params(10.0, 3.0, 0.5);
    const ChannelSet ch = sample_channels(p, seed);
    const SchemeResult zf = relaxed_zf_qos(ch, p);
    REQUIRE(zf.status == SolveStatus::optimal);
    CHECK(zf.bob_metric == doctest::Approx(p.gamma_t).epsilon(1e-8));
    CHECK(quad_form(ch.h_e_est, zf.q_x) <= 1e-10 * zf.q_x.trace().real());
  }

  // Orthogonal channels: the beam is the matched one and costs exactly
  // gamma sigma^2 / |h_b|^2.
  SystemParams p = qos_params(10.0, 3.0, 0.0);
  ChannelSet ch = sample_channels(p, 4510);
  const HermitianMatrix proj = null_projector(ch.h_e_est);
  ch.h_b = ComplexVector((proj * ch.h_b.adjoint()).adjoint());
  const SchemeResult zf = relaxed_zf_qos(ch, p);
  REQUIRE(zf.status == SolveStatus::optimal);
  CHECK(zf.q_x.trace().real() ==
        doctest::Approx(p.gamma_t * p.sigma_sq / ch.h_b.squaredNorm())
            .epsilon(1e-9));

  // Parallel channels leave no zero-forcing direction.
  ChannelSet par = sample_channels(p, 4511);
  par.h_e_est = 0.7 * par.h_b;
  CHECK(relaxed_zf_qos(par, p).status == SolveStatus::outage);

  // The estimate-exact program should never need more transmit power than
  // the projection beam, and with ample budget it also nulls the estimate.
  const ChannelSet ch2 = sample_channels(p, 4512);
  const SchemeResult zf2 = relaxed_zf_qos(ch2, p);
  const SchemeResult dt2 = solve_qos_dt_nonrobust(ch2, p);
  REQUIRE(zf2.status == SolveStatus::optimal);
  REQUIRE(dt2.status == SolveStatus::optimal);
  CHECK(dt2.q_x.trace().real() <=
        zf2.q_x.trace().real() * (1.0 + 1e-3) + 1e-9);
  CHECK(dt2.eve_metric <= 1e-6);
}

TEST_CASE("the joint bisection reduces to the estimate-exact program without jamming") {
  for (std::uint64_t seed : {4601u, 4602u, 4603u}) {
    SystemParams p = qos_params(10.0, 1.0, 0.0);
    const ChannelSet ch = sample_channels(p, seed);
    p.gamma_t = tight_floor(ch, p);

    const SchemeResult dt = solve_qos_dt_nonrobust(ch, p);
    const SchemeResult cj = solve_qos_cj_robust(ch, p, 1e-7, true);
    REQUIRE(dt.status == SolveStatus::optimal);
    REQUIRE(cj.status == SolveStatus::optimal);
    CHECK(cj.q_z.norm() == 0.0);
    CHECK(std::abs(cj.eve_metric - dt.eve_metric) <=
          1e-5 * (1.0 + dt.eve_metric));
  }
}

TEST_CASE("an unreachable floor reports outage in every scheme") {
  SystemParams p = qos_params(10.0, 1.0, 0.5);
  const ChannelSet ch = sample_channels(p, 4700);
  const double limit = p.p_total * ch.h_b.squaredNorm() / p.sigma_sq;

  SystemParams over = p;
  over.gamma_t = 1.01 * limit;
  CHECK(solve_qos_dt_nonrobust(ch, over).status == SolveStatus::outage);
  CHECK(solve_qos_dt_robust(ch, over).status == SolveStatus::outage);
  CHECK(relaxed_zf_qos(ch, over).status == SolveStatus::outage);
  CHECK(solve_qos_cj_robust(ch, over).status == SolveStatus::outage);
  CHECK(solve_qos_cj_nonrobust(ch, over).status == SolveStatus::outage);

  SystemParams under = p;
  under.gamma_t = 0.9 * limit;
  CHECK(solve_qos_dt_nonrobust(ch, under).status == SolveStatus::optimal);

  CHECK_THROWS_AS(solve_qos_dt_nonrobust(ch, qos_params(10.0, 0.0, 0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_qos_cj_robust(ch, qos_params(10.0, -1.0, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("every served design meets the receiver floor") {
  for (std::uint64_t seed : {4801u, 4802u}) {
    for (double gamma : {1.0, 4.0, 16.0}) {
      SystemParams p = qos_params(13.0, gamma, 0.5);
      const ChannelSet ch = sample_channels(p, seed);
      if (p.gamma_t * p.sigma_sq > p.p_total * ch.h_b.squaredNorm()) continue;
      const SchemeResult results[] = {
          solve_qos_dt_nonrobust(ch, p), solve_qos_dt_robust(ch, p),
          relaxed_zf_qos(ch, p), solve_qos_cj_robust(ch, p),
          solve_qos_cj_nonrobust(ch, p)};
      for (const SchemeResult& r : results) {
        if (r.status == SolveStatus::outage) continue;
        REQUIRE(r.status == SolveStatus::optimal);
        CHECK(r.bob_metric >= gamma - 1e-6);
        CHECK(r.q_x.trace().real() + r.q_z.trace().real() <=
              p.p_total * (1.0 + 1e-6));
        CHECK(r.eve_metric >= 0.0);
      }
    }
  }
}

TEST_CASE("perfect estimates drive the eavesdropper to zero in every scheme") {
  for (std::uint64_t seed : {4901u, 4902u}) {
    SystemParams p = qos_params(10.0, 2.0, 0.0);
    const ChannelSet ch = sample_channels(p, seed);
    const SchemeResult results[] = {
        solve_qos_dt_nonrobust(ch, p), solve_qos_dt_robust(ch, p),
        relaxed_zf_qos(ch, p), solve_qos_cj_robust(ch, p),
        solve_qos_cj_nonrobust(ch, p)};
    for (const SchemeResult& r : results) {
      REQUIRE(r.status == SolveStatus::optimal);
      CHECK(r.eve_metric <= 1e-6);
    }
  }
}

TEST_CASE("the bisection certificate is reproducible at the stopped level") {
  const double delta = 1e-7;
  for (std::uint64_t seed : {5001u, 5002u, 5003u}) {
    SystemParams p = qos_params(10.0, 4.0, 0.5);
    const ChannelSet ch = sample_channels(p, seed);
    const SchemeResult r = solve_qos_cj_robust(ch, p, delta);
    REQUIRE(r.status == SolveStatus::optimal);
    REQUIRE(!r.rate_trace.empty());
    const double t_star = r.rate_trace.back();
    // Accepted levels shrink monotonically toward the certificate.
    for (std::size_t i = 1; i < r.rate_trace.size(); ++i) {
      CHECK(r.rate_trace[i] < r.rate_trace[i - 1]);
    }
    CHECK(qos_cj_level_feasible(ch, p, t_star));
    CHECK_FALSE(qos_cj_level_feasible(ch, p, t_star - 4.0 * delta));
    // The extracted design's exact worst case sits just under the level.
    CHECK(r.eve_metric <= t_star + 1e-9);
    CHECK(t_star - r.eve_metric <= 1e-4 * (1.0 + t_star));
  }
}

TEST_CASE("jamming never raises the certified level and closes in at high floors") {
  for (std::uint64_t seed : {5101u, 5102u}) {
    SystemParams p = qos_params(16.0, 1.0, 0.5);
    const ChannelSet ch = sample_channels(p, seed);
    std::vector<double> ratio;
    for (double gamma : {1.0, 10.0, std::min(100.0, 0.9 * p.p_total *
                                                        ch.h_b.squaredNorm() /
                                                        p.sigma_sq)}) {
      SystemParams q = p;
      q.gamma_t = gamma;
      const SchemeResult dt = solve_qos_dt_robust(ch, q);
      const SchemeResult cj = solve_qos_cj_robust(ch, q);
      REQUIRE(dt.status == SolveStatus::optimal);
      REQUIRE(cj.status == SolveStatus::optimal);
      CHECK(cj.eve_metric <= dt.eve_metric * (1.0 + 1e-6) + 1e-9);
      ratio.push_back(cj.eve_metric / dt.eve_metric);
    }
    // The advantage of jamming shrinks as the floor eats the budget.
    CHECK(ratio.back() >= ratio.front() - 1e-6);
  }
}

TEST_CASE("the estimate-designed cooperative baseline never beats the certified design") {
  SystemParams p = qos_params(10.0, 4.0, 0.5);
  double sum_plain = 0.0;
  double sum_robust = 0.0;
  int used = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t seed = 5200 + static_cast<std::uint64_t>(trial);
    const ChannelSet ch = sample_channels(p, seed);
    if (p.gamma_t * p.sigma_sq > p.p_total * ch.h_b.squaredNorm()) continue;
    const SchemeResult plain = solve_qos_cj_nonrobust(ch, p);
    const SchemeResult rob = solve_qos_cj_robust(ch, p);
    REQUIRE(plain.status == SolveStatus::optimal);
    REQUIRE(rob.status == SolveStatus::optimal);
    // The baseline is feasible for the certified problem, so per trial its
    // worst case can only be worse (up to bisection tolerance).
    CHECK(rob.eve_metric <= plain.eve_metric * (1.0 + 1e-3) + 1e-6);
    sum_plain += plain.eve_metric;
    sum_robust += rob.eve_metric;
    ++used;
  }
  REQUIRE(used >= 90);
  CHECK(sum_plain / used >= sum_robust / used);
}

TEST_CASE("a single-antenna helper still serves the floor") {
  SystemParams p = qos_params(10.0, 3.0, 0.5);
  p.n_h = 1;
  const ChannelSet ch = sample_channels(p, 5300);
  const SchemeResult plain = solve_qos_cj_nonrobust(ch, p);
  REQUIRE(plain.status == SolveStatus::optimal);
  // Any helper direction is heard by the receiver, so the baseline must
  // leave the helper silent rather than violate the floor.
  CHECK(plain.q_z.norm() <= 1e-12);
  CHECK(plain.bob_metric >= p.gamma_t - 1e-6);

  const SchemeResult rob = solve_qos_cj_robust(ch, p);
  REQUIRE(rob.status == SolveStatus::optimal);
  CHECK(rob.bob_metric >= p.gamma_t - 1e-6);
}
