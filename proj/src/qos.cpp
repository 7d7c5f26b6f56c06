#include "wiretap/qos.hpp"

#include "wiretap/conic.hpp"
#include "wiretap/linalg.hpp"
#include "wiretap/robust_cj.hpp"
#include "wiretap/robust_dt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wiretap {
namespace {

constexpr double kEpsDegenerate = 1e-14;  // squared radii below this are zero
// Certified-denominator floor, relative to the noise power.  The true
// worst-case noise at the eavesdropper is at least sigma^2, so a floor this
// far below sigma^2 can never cut off a correctly certified design.
constexpr double kDenFloorRel = 1e-7;

HermitianMatrix outer(const ComplexVector& v) {
  return HermitianMatrix(v.adjoint() * v);
}

void require_positive_floor(const SystemParams& params) {
  if (!(params.gamma_t > 0.0)) {
    throw std::invalid_argument(
        "qos: the receiver SINR floor gamma_t must be positive");
  }
  if (!(params.p_total > 0.0)) {
    throw std::invalid_argument("qos: the power budget must be positive");
  }
}

// The floor is attainable iff the full-budget maximum-ratio beam reaches it:
// any off-beam power or jamming only lowers the receiver SINR further.
bool floor_unreachable(const ChannelSet& ch, const SystemParams& params) {
  return params.gamma_t * params.sigma_sq >
         params.p_total * ch.h_b.squaredNorm();
}

SchemeResult outage_result(const ChannelSet& ch) {
  SchemeResult out;
  const int n_a = static_cast<int>(ch.h_b.cols());
  const int n_h = static_cast<int>(ch.g_b.cols());
  out.q_x = HermitianMatrix::Zero(n_a, n_a);
  out.q_z = HermitianMatrix::Zero(n_h, n_h);
  out.status = SolveStatus::outage;
  return out;
}

// Fills the report fields of a finished design.  The eavesdropper's signal
// term depends only on e_h and its jamming term only on e_g, so the per-ball
// extremes compose into the exact worst-case SINR.
SchemeResult finalize(const ChannelSet& ch, const SystemParams& params,
                      const HermitianMatrix& q_x, const HermitianMatrix& q_z,
                      int iterations, SolveStatus status) {
  SchemeResult out;
  out.q_x = q_x;
  out.q_z = q_z;
  out.iterations = iterations;
  out.status = status;
  if (params.eps_h_sq > kEpsDegenerate) {
    out.worst_mismatch.e_h =
        worst_mismatch_dt(q_x, ch.h_e_est, params.eps_h_sq).e;
  }
  if (params.eps_g_sq > kEpsDegenerate && q_z.norm() > kEpsDegenerate) {
    out.worst_mismatch.e_g =
        worst_mismatch_cj(q_z, ch.g_e_est, params.eps_g_sq).e;
  }
  out.eve_metric = eve_sinr(ch, q_x, q_z, out.worst_mismatch, params.sigma_sq);
  out.bob_metric = bob_sinr(ch, q_x, q_z, params.sigma_sq);
  out.secrecy_rate_bits =
      secrecy_rate_cj(ch, q_x, q_z, out.worst_mismatch, params.sigma_sq);
  out.q_x_spectrum = eigenvalues_desc(q_x);
  return out;
}

struct MinLeakage {
  HermitianMatrix q_x;
  double trace = 0.0;
  SolveStatus status = SolveStatus::optimal;
};

// Smallest estimated eavesdropper power meeting the receiver floor, then the
// cheapest covariance attaining it.  The second stage pins the transmit
// power down so "the remaining budget" is well defined for the cooperative
// baseline; without it the optimal-leakage set typically contains designs of
// every power from the minimum up to the full budget.
MinLeakage min_estimated_leakage(const ChannelSet& ch,
                                 const SystemParams& params) {
  MinLeakage out;
  const int n = static_cast<int>(ch.h_b.cols());
  out.q_x = HermitianMatrix::Zero(n, n);
  if (floor_unreachable(ch, params)) {
    out.status = SolveStatus::outage;
    return out;
  }
  const HermitianMatrix he = outer(ch.h_e_est);
  const HermitianMatrix hb = outer(ch.h_b);
  const double target = params.gamma_t * params.sigma_sq;

  conic::ConicProblem p1;
  {
    const int q = p1.add_hermitian("q", n);
    p1.add_psd(q);
    p1.add_ineq(p1.trace(q), params.p_total);
    conic::LinExpr bob = p1.trace_product(q, hb);
    bob.scale(-1.0);
    p1.add_ineq(bob, -target);
    p1.set_objective(conic::Sense::minimize, p1.trace_product(q, he));
  }
  conic::ConicSolution s1 = p1.solve();
  if (s1.status == conic::SolutionStatus::inaccurate) {
    conic::SolveOptions hp;
    hp.high_precision = true;
    hp.warm_start = &s1.raw_x;
    const conic::ConicSolution retry = p1.solve(hp);
    if (retry.status == conic::SolutionStatus::optimal) s1 = retry;
  }
  if (s1.status == conic::SolutionStatus::infeasible) {
    out.status = SolveStatus::outage;
    return out;
  }
  if (s1.status == conic::SolutionStatus::error) {
    out.status = SolveStatus::solver_failure;
    return out;
  }
  const double v_star = s1.objective_value;

  conic::ConicProblem p2;
  {
    const int q = p2.add_hermitian("q", n);
    p2.add_psd(q);
    p2.add_ineq(p2.trace(q), params.p_total);
    conic::LinExpr bob = p2.trace_product(q, hb);
    bob.scale(-1.0);
    p2.add_ineq(bob, -target);
    // Leakage pinned to the stage-1 optimum.  The absolute allowance must
    // clear the kernel's strict-interior margin (~5e-8 at this scale) while
    // staying well under the 1e-6-per-noise-power nulling expected of the
    // estimate-exact designs, so it is tied to the noise floor.
    p2.add_ineq(p2.trace_product(q, he),
                v_star + 1e-7 * params.sigma_sq + 1e-6 * std::abs(v_star));
    p2.set_objective(conic::Sense::minimize, p2.trace(q));
  }
  // The tiny leakage allowance makes this stage ill-conditioned from a cold
  // start; the stage-1 point is feasible for it and centers quickly.
  conic::SolveOptions warm;
  warm.warm_start = &s1.raw_x;
  conic::ConicSolution s2 = p2.solve(warm);
  if (s2.status == conic::SolutionStatus::inaccurate) {
    conic::SolveOptions hp = warm;
    hp.high_precision = true;
    const conic::ConicSolution retry = p2.solve(hp);
    if (retry.status == conic::SolutionStatus::optimal) s2 = retry;
  }

  const bool s1_usable = s1.status == conic::SolutionStatus::optimal ||
                         s1.status == conic::SolutionStatus::inaccurate;
  const bool s2_usable = s2.status == conic::SolutionStatus::optimal ||
                         s2.status == conic::SolutionStatus::inaccurate;
  if (s2_usable) {
    out.q_x = s2.matrices.at("q");
    out.status = (s1.status == conic::SolutionStatus::optimal &&
                  s2.status == conic::SolutionStatus::optimal)
                     ? SolveStatus::optimal
                     : SolveStatus::max_iter;
  } else if (s1_usable) {
    out.q_x = s1.matrices.at("q");
    out.status = SolveStatus::max_iter;
  } else {
    out.status = SolveStatus::solver_failure;
    return out;
  }
  out.trace = out.q_x.trace().real();
  return out;
}

// Feasibility program for the joint design at eavesdropper-SINR level t:
// does a budget-feasible (q_x, q_z) meeting the receiver floor exist whose
// certified worst-case signal is at most t times its certified worst-case
// noise?  Certificates are S-procedure multipliers folded into bordered
// blocks with scalar slacks.
conic::ConicProblem build_cj_level(const ChannelSet& ch,
                                   const SystemParams& params, double t,
                                   bool with_jamming) {
  const int n_a = static_cast<int>(ch.h_b.cols());
  const int n_h = static_cast<int>(ch.g_b.cols());
  const double target = params.gamma_t * params.sigma_sq;

  conic::ConicProblem prob;
  const int qx = prob.add_hermitian("qx", n_a);
  prob.add_psd(qx);

  conic::LinExpr budget = prob.trace(qx);
  conic::LinExpr bob = prob.trace_product(qx, outer(ch.h_b));
  bob.scale(-1.0);
  // Certified numerator minus t times the certified denominator.
  conic::LinExpr row = prob.trace_product(qx, outer(ch.h_e_est));

  if (params.eps_h_sq > kEpsDegenerate) {
    const int mu = prob.add_scalar("mu", conic::VarSign::nonneg);
    const int psi = prob.add_scalar("psi", conic::VarSign::free);
    const int blk = prob.add_lmi_block(n_a + 1);
    prob.lmi_add_matrix_term(blk, qx, 0, 0, -1.0);
    HermitianMatrix mu_coeff = HermitianMatrix::Zero(n_a + 1, n_a + 1);
    mu_coeff.topLeftCorner(n_a, n_a) = HermitianMatrix::Identity(n_a, n_a);
    prob.lmi_add_scalar_term(blk, mu, mu_coeff);
    prob.lmi_add_vector_term(blk, qx, ch.h_e_est, 0, n_a, 1.0);
    HermitianMatrix psi_coeff = HermitianMatrix::Zero(n_a + 1, n_a + 1);
    psi_coeff(n_a, n_a) = 1.0;
    prob.lmi_add_scalar_term(blk, psi, psi_coeff);
    row += prob.scalar_expr(psi);
    row += prob.scalar_expr(mu, params.eps_h_sq);
  }

  if (with_jamming) {
    const int qz = prob.add_hermitian("qz", n_h);
    prob.add_psd(qz);
    budget += prob.trace(qz);
    conic::LinExpr bob_jam = prob.trace_product(qz, outer(ch.g_b));
    bob_jam.scale(params.gamma_t);
    bob += bob_jam;

    conic::LinExpr jam = prob.trace_product(qz, outer(ch.g_e_est));
    jam.scale(-t);
    row += jam;
    if (params.eps_g_sq > kEpsDegenerate) {
      // Certified lower bound on the jamming the eavesdropper receives:
      //   min over the ball >= g~ Qz g~^H - nu eps^2 - phi,
      //   [[nu I + Qz, Qz g~^H], [g~ Qz, phi]] >= 0.
      const int nu = prob.add_scalar("nu", conic::VarSign::nonneg);
      const int phi = prob.add_scalar("phi", conic::VarSign::free);
      const int blk = prob.add_lmi_block(n_h + 1);
      prob.lmi_add_matrix_term(blk, qz, 0, 0, 1.0);
      HermitianMatrix nu_coeff = HermitianMatrix::Zero(n_h + 1, n_h + 1);
      nu_coeff.topLeftCorner(n_h, n_h) = HermitianMatrix::Identity(n_h, n_h);
      prob.lmi_add_scalar_term(blk, nu, nu_coeff);
      prob.lmi_add_vector_term(blk, qz, ch.g_e_est, 0, n_h, 1.0);
      HermitianMatrix phi_coeff = HermitianMatrix::Zero(n_h + 1, n_h + 1);
      phi_coeff(n_h, n_h) = 1.0;
      prob.lmi_add_scalar_term(blk, phi, phi_coeff);

      // The certified denominator must stay positive for the fractional
      // transform to be valid (it also bounds nu and phi, keeping the
      // feasible set compact for the interior-point kernel).
      conic::LinExpr pos = prob.trace_product(qz, outer(ch.g_e_est));
      pos.scale(-1.0);
      pos += prob.scalar_expr(nu, params.eps_g_sq);
      pos += prob.scalar_expr(phi);
      prob.add_ineq(pos, params.sigma_sq * (1.0 - kDenFloorRel));

      row += prob.scalar_expr(nu, t * params.eps_g_sq);
      row += prob.scalar_expr(phi, t);
    }
  }

  prob.add_ineq(budget, params.p_total);
  prob.add_ineq(bob, -target);
  prob.add_ineq(row, t * params.sigma_sq);
  prob.set_objective(conic::Sense::feasibility);
  return prob;
}

// The one level-probe used by both the bisection and the exported
// certificate check, so a reported level is reproducible from outside the
// solver: always a cold start (warm chaining would make the answer depend
// on the probe history) at default precision.
conic::ConicSolution solve_cj_level(const ChannelSet& ch,
                                    const SystemParams& params, double t,
                                    bool with_jamming) {
  return build_cj_level(ch, params, t, with_jamming).solve();
}

}  // namespace

SchemeResult solve_qos_dt_nonrobust(const ChannelSet& ch,
                                    const SystemParams& params) {
  require_positive_floor(params);
  const MinLeakage ml = min_estimated_leakage(ch, params);
  if (ml.status == SolveStatus::outage) return outage_result(ch);
  if (ml.status == SolveStatus::solver_failure) {
    SchemeResult out = outage_result(ch);
    out.status = SolveStatus::solver_failure;
    return out;
  }
  const int n_h = static_cast<int>(ch.g_b.cols());
  return finalize(ch, params, ml.q_x, HermitianMatrix::Zero(n_h, n_h), 2,
                  ml.status);
}

SchemeResult solve_qos_dt_robust(const ChannelSet& ch,
                                 const SystemParams& params) {
  require_positive_floor(params);
  if (params.eps_h_sq <= kEpsDegenerate) {
    return solve_qos_dt_nonrobust(ch, params);
  }
  if (floor_unreachable(ch, params)) return outage_result(ch);

  const int n = static_cast<int>(ch.h_b.cols());
  const int n_h = static_cast<int>(ch.g_b.cols());
  const double target = params.gamma_t * params.sigma_sq;

  conic::ConicProblem prob;
  const int q = prob.add_hermitian("q", n);
  prob.add_psd(q);
  prob.add_ineq(prob.trace(q), params.p_total);
  conic::LinExpr bob = prob.trace_product(q, outer(ch.h_b));
  bob.scale(-1.0);
  prob.add_ineq(bob, -target);

  const int mu = prob.add_scalar("mu", conic::VarSign::nonneg);
  const int psi = prob.add_scalar("psi", conic::VarSign::free);
  // Growing mu or psi only enlarges the bordered block, so without upper
  // bounds the phase I barrier has no center.  Any optimum is dominated by
  // the value of the feasible certificate mu = 2 lambda_max(Q): there
  // psi <= |h~|^2 lambda_max and the whole objective sits below
  // 2 P eps^2 + 2 P |h~|^2, so these caps never bind at the solution.
  const double value_cap =
      2.0 * params.p_total * (params.eps_h_sq + ch.h_e_est.squaredNorm()) +
      1.0;
  prob.add_ineq(prob.scalar_expr(mu),
                std::min(1e8, 4.0 * value_cap / params.eps_h_sq));
  prob.add_ineq(prob.scalar_expr(psi), 4.0 * value_cap);

  const int blk = prob.add_lmi_block(n + 1);
  prob.lmi_add_matrix_term(blk, q, 0, 0, -1.0);
  HermitianMatrix mu_coeff = HermitianMatrix::Zero(n + 1, n + 1);
  mu_coeff.topLeftCorner(n, n) = HermitianMatrix::Identity(n, n);
  prob.lmi_add_scalar_term(blk, mu, mu_coeff);
  prob.lmi_add_vector_term(blk, q, ch.h_e_est, 0, n, 1.0);
  HermitianMatrix psi_coeff = HermitianMatrix::Zero(n + 1, n + 1);
  psi_coeff(n, n) = 1.0;
  prob.lmi_add_scalar_term(blk, psi, psi_coeff);

  conic::LinExpr obj = prob.trace_product(q, outer(ch.h_e_est));
  obj += prob.scalar_expr(psi);
  obj += prob.scalar_expr(mu, params.eps_h_sq);
  prob.set_objective(conic::Sense::minimize, obj);

  const conic::ConicSolution sol = prob.solve();
  if (sol.status == conic::SolutionStatus::infeasible) {
    return outage_result(ch);
  }
  if (sol.status == conic::SolutionStatus::error) {
    SchemeResult out = outage_result(ch);
    out.status = SolveStatus::solver_failure;
    return out;
  }
  const SolveStatus st = sol.status == conic::SolutionStatus::optimal
                             ? SolveStatus::optimal
                             : SolveStatus::max_iter;
  return finalize(ch, params, sol.matrices.at("q"),
                  HermitianMatrix::Zero(n_h, n_h), 1, st);
}

SchemeResult relaxed_zf_qos(const ChannelSet& ch, const SystemParams& params) {
  require_positive_floor(params);
  const int n_h = static_cast<int>(ch.g_b.cols());

  // Beam along the receiver channel's component outside the estimated
  // eavesdropper direction; with no usable estimate the plain matched beam
  // already leaks nothing.
  Eigen::VectorXcd dir;
  if (ch.h_e_est.squaredNorm() <= kEpsDegenerate) {
    dir = ch.h_b.adjoint();
  } else {
    dir = null_projector(ch.h_e_est) * ch.h_b.adjoint();
  }
  const double gain = dir.squaredNorm();  // receiver power of the unit beam
  if (gain <= 1e-18 * ch.h_b.squaredNorm()) {
    return outage_result(ch);  // channels parallel: zero forcing blinds Bob
  }
  const double p_req = params.gamma_t * params.sigma_sq / gain;
  if (p_req > params.p_total * (1.0 + 1e-12)) {
    return outage_result(ch);  // exact floor needs more than the budget
  }
  const Eigen::VectorXcd w = dir / dir.norm();
  const HermitianMatrix q_x = p_req * (w * w.adjoint());
  return finalize(ch, params, q_x, HermitianMatrix::Zero(n_h, n_h), 0,
                  SolveStatus::optimal);
}

bool qos_cj_level_feasible(const ChannelSet& ch, const SystemParams& params,
                           double t, bool force_zero_jamming) {
  const bool with_jamming =
      !force_zero_jamming && static_cast<int>(ch.g_b.cols()) > 0;
  return solve_cj_level(ch, params, t, with_jamming).status ==
         conic::SolutionStatus::optimal;
}

SchemeResult solve_qos_cj_robust(const ChannelSet& ch,
                                 const SystemParams& params, double delta,
                                 bool force_zero_jamming) {
  require_positive_floor(params);
  const int n_h = static_cast<int>(ch.g_b.cols());
  const bool with_jamming = !force_zero_jamming && n_h > 0;
  if (floor_unreachable(ch, params)) return outage_result(ch);

  // Bracket: any budget-feasible design has worst-case signal at most
  // (|h~| + eps)^2 P and noise at least sigma^2, so this level is always
  // attainable; the baseline's level tightens nothing but mirrors where the
  // optimum tends to live and keeps the bracket honest when |h~| is tiny.
  const double inflation =
      std::pow(ch.h_e_est.norm() + std::sqrt(params.eps_h_sq), 2) *
      params.p_total / params.sigma_sq;
  double upper = inflation + 1e-6;
  {
    const SchemeResult base = solve_qos_cj_nonrobust(ch, params);
    if (base.status == SolveStatus::optimal) {
      upper += eve_sinr(ch, base.q_x, base.q_z, MismatchPair{},
                        params.sigma_sq);
    }
  }

  conic::ConicSolution best;
  bool have_point = false;
  std::vector<double> levels;  // accepted levels, strictly decreasing
  const auto feasible = [&](double t) {
    const conic::ConicSolution sol =
        solve_cj_level(ch, params, t, with_jamming);
    if (sol.status != conic::SolutionStatus::optimal) return false;
    best = sol;
    have_point = true;
    levels.push_back(t);
    return true;
  };

  conic::BisectionConfig cfg;
  cfg.lower = 0.0;
  cfg.upper = upper;
  cfg.tolerance = std::max(delta, 1e-12);
  cfg.max_iter = 80;
  const conic::BisectResult br = conic::bisect(feasible, cfg);
  if (br.status == conic::BisectStatus::upper_bound_infeasible ||
      !have_point) {
    // The bracket argument guarantees the upper end is feasible, so landing
    // here means the kernel failed, not that the link is in outage.
    SchemeResult out = outage_result(ch);
    out.status = SolveStatus::solver_failure;
    return out;
  }

  // Re-center at the accepted level so the extracted matrices sit at a
  // well-conditioned interior point rather than the phase transition.
  {
    const conic::ConicProblem prob =
        build_cj_level(ch, params, br.t_star, with_jamming);
    conic::SolveOptions opts;
    opts.analytic_center = true;
    opts.warm_start = &best.raw_x;
    const conic::ConicSolution sol = prob.solve(opts);
    if (sol.status == conic::SolutionStatus::optimal) best = sol;
  }

  const HermitianMatrix q_x = best.matrices.at("qx");
  const HermitianMatrix q_z = with_jamming
                                  ? best.matrices.at("qz")
                                  : HermitianMatrix::Zero(n_h, n_h);
  const SolveStatus st = br.status == conic::BisectStatus::max_iter
                             ? SolveStatus::max_iter
                             : SolveStatus::optimal;
  SchemeResult out = finalize(ch, params, q_x, q_z, br.iterations, st);
  // The accepted-level history doubles as the outer-iteration trace; its
  // last entry is the certified level the bisection stopped at.
  out.rate_trace = std::move(levels);
  return out;
}

SchemeResult solve_qos_cj_nonrobust(const ChannelSet& ch,
                                    const SystemParams& params) {
  require_positive_floor(params);
  const MinLeakage ml = min_estimated_leakage(ch, params);
  if (ml.status == SolveStatus::outage) return outage_result(ch);
  if (ml.status == SolveStatus::solver_failure) {
    SchemeResult out = outage_result(ch);
    out.status = SolveStatus::solver_failure;
    return out;
  }
  const int n_h = static_cast<int>(ch.g_b.cols());
  HermitianMatrix q_z = HermitianMatrix::Zero(n_h, n_h);
  const double residual = params.p_total - ml.trace;
  if (residual > 1e-9 * params.p_total && n_h > 0) {
    try {
      const ComplexVector w = null_steering(ch.g_b, ch.g_e_est);
      q_z = residual * outer(w);
    } catch (const std::invalid_argument&) {
      // Every direction the receiver cannot hear is also invisible at the
      // eavesdropper's estimate; spending the residual would jam nobody.
    }
  }
  return finalize(ch, params, ml.q_x, q_z, 2, ml.status);
}

}  // namespace wiretap
