#include "wiretap/robust_dt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wiretap {
namespace {

constexpr double kEpsDegenerate = 1e-14;  // squared radii below this are zero

HermitianMatrix outer(const ComplexVector& v) {
  return hermitize(v.adjoint() * v);
}

// Feasibility oracle for the ratio bisection.  At a candidate ratio t it asks
// whether some covariance q (PSD, trace at most p_s) satisfies
//   eve_const + worst-case eve power  <=  t * (bob_const + bob power),
// with the worst case absorbed through the S-procedure multiplier mu and a
// slack psi bounding the Schur-complement term:
//   worst eve power <= he~ q he~^H + mu eps^2 + psi,
//   [[mu I - q, q he~^H], [he~ q, psi]] >= 0.
// The matrix-slack variant (full psi block coupled as [[Psi, q],[q, mu I-q]])
// certifies the same set but enters the budget row only through he~ Psi he~^H,
// leaving the orthogonal part of Psi unbounded above; a log-barrier method
// has no analytic center on such a set.  The bordered form above is its exact
// Schur reduction and is bounded.
struct RatioOracle {
  ComplexVector h_b, h_e_est;
  double eps_h_sq = 0.0;
  double p_s = 1.0;
  double bob_const = 1.0;
  double eve_const = 1.0;

  std::vector<double> warm;
  conic::ConicSolution last_feasible;
  bool have_feasible = false;

  conic::ConicProblem build(double t) const {
    const int n = static_cast<int>(h_b.cols());
    const HermitianMatrix he_outer = outer(h_e_est);
    const HermitianMatrix hb_outer = outer(h_b);

    conic::ConicProblem prob;
    const int q = prob.add_hermitian("q", n);
    prob.add_psd(q);
    prob.add_ineq(prob.trace(q), p_s);

    conic::LinExpr row = prob.trace_product(q, he_outer);
    conic::LinExpr bob_term = prob.trace_product(q, hb_outer);
    bob_term.scale(-t);
    row += bob_term;

    if (eps_h_sq > kEpsDegenerate) {
      const int mu = prob.add_scalar("mu", conic::VarSign::nonneg);
      const int psi = prob.add_scalar("psi", conic::VarSign::free);
      const int blk = prob.add_lmi_block(n + 1);
      prob.lmi_add_matrix_term(blk, q, 0, 0, -1.0);
      HermitianMatrix mu_coeff = HermitianMatrix::Zero(n + 1, n + 1);
      mu_coeff.topLeftCorner(n, n) = HermitianMatrix::Identity(n, n);
      prob.lmi_add_scalar_term(blk, mu, mu_coeff);
      prob.lmi_add_vector_term(blk, q, h_e_est, 0, n, 1.0);
      HermitianMatrix psi_coeff = HermitianMatrix::Zero(n + 1, n + 1);
      psi_coeff(n, n) = 1.0;
      prob.lmi_add_scalar_term(blk, psi, psi_coeff);

      row += prob.scalar_expr(psi);
      row += prob.scalar_expr(mu, eps_h_sq);
    }
    prob.add_ineq(row, t * bob_const - eve_const);
    prob.set_objective(conic::Sense::feasibility);
    return prob;
  }

  conic::ConicSolution solve_at(double t, bool center) {
    const conic::ConicProblem prob = build(t);
    conic::SolveOptions opts;
    opts.analytic_center = center;
    if (!warm.empty()) opts.warm_start = &warm;
    return prob.solve(opts);
  }

  bool feasible(double t) {
    conic::ConicSolution sol = solve_at(t, false);
    if (sol.status == conic::SolutionStatus::optimal) {
      warm = sol.raw_x;
      last_feasible = std::move(sol);
      have_feasible = true;
      return true;
    }
    return false;
  }

  // Ratio value of the fixed reference assignment (isotropic covariance with
  // saturated multiplier); a valid starting upper bound whenever that
  // assignment is feasible.
  double initial_upper() const {
    const int n = static_cast<int>(h_b.cols());
    const HermitianMatrix q0 =
        (p_s / n) * HermitianMatrix::Identity(n, n);
    const double den = bob_const + quad_form(h_b, q0);
    double num = eve_const;
    if (eps_h_sq > kEpsDegenerate) {
      const double mu0 = p_s;
      const HermitianMatrix gap =
          mu0 * HermitianMatrix::Identity(n, n) - q0;
      const HermitianMatrix psi0 = hermitize(q0 * pseudo_inverse(gap) * q0);
      num += mu0 * eps_h_sq + quad_form(h_e_est, q0 + psi0);
    } else {
      num += quad_form(h_e_est, q0);
    }
    return num / den;
  }
};

ComplexVector top_eigvec_row(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(hermitize(m));
  return es.eigenvectors().col(m.rows() - 1).adjoint();
}

}  // namespace

RatioDesign maximize_worst_case_ratio(const ComplexVector& h_b,
                                      const ComplexVector& h_e_est,
                                      double eps_h_sq, double p_s,
                                      double bob_const, double eve_const,
                                      double delta, int max_iter) {
  const int n = static_cast<int>(h_b.cols());
  RatioDesign out;
  out.q_x = HermitianMatrix::Zero(n, n);

  RatioOracle oracle;
  oracle.h_b = h_b;
  oracle.h_e_est = h_e_est;
  oracle.eps_h_sq = eps_h_sq;
  oracle.p_s = p_s;
  oracle.bob_const = bob_const;
  oracle.eve_const = eve_const;

  const double lower = eve_const / (bob_const + p_s * h_b.squaredNorm());
  double upper = std::max(oracle.initial_upper(), lower + 10.0 * delta);

  // The reference assignment sits on the LMI boundary, so the posed strict
  // feasibility test can reject it; expand until the oracle accepts.
  int expansions = 0;
  while (!oracle.feasible(upper)) {
    upper = 2.0 * upper + 0.1;
    if (++expansions > 40) {
      out.status = SolveStatus::solver_failure;
      return out;
    }
  }

  conic::BisectionConfig cfg;
  cfg.lower = lower;
  cfg.upper = upper;
  cfg.tolerance = delta;
  cfg.max_iter = max_iter;
  const conic::BisectResult res =
      conic::bisect([&oracle](double t) { return oracle.feasible(t); }, cfg);

  out.t_star = res.t_star;
  out.iterations = res.iterations;
  switch (res.status) {
    case conic::BisectStatus::converged:
    case conic::BisectStatus::lower_bound_feasible:
      out.status = SolveStatus::optimal;
      break;
    case conic::BisectStatus::max_iter:
      out.status = SolveStatus::max_iter;
      break;
    case conic::BisectStatus::upper_bound_infeasible:
      out.status = SolveStatus::solver_failure;
      return out;
  }

  // Extract a centered point at the accepted ratio.
  conic::ConicSolution final_sol = oracle.solve_at(res.t_star, true);
  if (final_sol.status != conic::SolutionStatus::optimal) {
    if (oracle.have_feasible) {
      final_sol = oracle.last_feasible;
    } else {
      out.status = SolveStatus::solver_failure;
      return out;
    }
  }
  out.q_x = hermitize(final_sol.matrices.at("q"));
  if (eps_h_sq > kEpsDegenerate) out.mu = final_sol.scalars.at("mu");
  return out;
}

bool worst_case_ratio_feasible(const ComplexVector& h_b,
                               const ComplexVector& h_e_est, double eps_h_sq,
                               double p_s, double bob_const, double eve_const,
                               double t) {
  RatioOracle oracle;
  oracle.h_b = h_b;
  oracle.h_e_est = h_e_est;
  oracle.eps_h_sq = eps_h_sq;
  oracle.p_s = p_s;
  oracle.bob_const = bob_const;
  oracle.eve_const = eve_const;
  return oracle.feasible(t);
}

SchemeResult solve_robust_dt(const ChannelSet& ch, const SystemParams& params,
                             double delta) {
  SchemeResult r;
  r.q_z = HermitianMatrix::Zero(params.n_h, params.n_h);

  const RatioDesign core = maximize_worst_case_ratio(
      ch.h_b, ch.h_e_est, params.eps_h_sq, params.p_s, params.sigma_sq,
      params.sigma_sq, delta);
  r.q_x = core.q_x;
  r.iterations = core.iterations;
  r.status = core.status;
  if (core.status == SolveStatus::solver_failure) return r;

  r.secrecy_rate_bits = std::max(0.0, std::log2(1.0 / core.t_star));
  const WorstMismatchDt wm =
      worst_mismatch_dt(core.q_x, ch.h_e_est, params.eps_h_sq);
  r.worst_mismatch.e_h = wm.e;
  r.worst_mismatch.e_g = ComplexVector::Zero(params.n_h);
  r.eve_metric = eve_sinr(ch, r.q_x, r.q_z, r.worst_mismatch, params.sigma_sq);
  r.bob_metric = bob_sinr(ch, r.q_x, r.q_z, params.sigma_sq);
  r.q_x_spectrum = eigenvalues_desc(r.q_x);
  return r;
}

WorstMismatchDt worst_mismatch_dt(const HermitianMatrix& q_x,
                                  const ComplexVector& h_e_est,
                                  double eps_h_sq) {
  const int n = static_cast<int>(h_e_est.cols());
  WorstMismatchDt out;
  out.e = ComplexVector::Zero(n);
  out.value = quad_form(h_e_est, q_x);

  if (eps_h_sq <= kEpsDegenerate) {
    // Degenerate ball: the supremum in the dual is approached as the
    // multiplier grows without bound, so report the limit directly.
    out.lambda = std::numeric_limits<double>::infinity();
    out.gamma = -out.value;
    return out;
  }

  // Dual trust-region SDP: maximize gamma subject to
  //   [[lambda I - Q, Q he^H], [he Q, -he Q he^H - lambda eps^2 - gamma]] PSD.
  conic::ConicProblem prob;
  const int lam = prob.add_scalar("lambda", conic::VarSign::nonneg);
  const int gam = prob.add_scalar("gamma", conic::VarSign::free);
  const int blk = prob.add_lmi_block(n + 1);

  HermitianMatrix f0 = HermitianMatrix::Zero(n + 1, n + 1);
  f0.topLeftCorner(n, n) = -q_x;
  f0.block(0, n, n, 1) = q_x * h_e_est.adjoint();
  f0.block(n, 0, 1, n) = h_e_est * q_x;
  f0(n, n) = -quad_form(h_e_est, q_x);
  prob.lmi_add_const(blk, hermitize(f0));

  HermitianMatrix lam_coeff = HermitianMatrix::Identity(n + 1, n + 1);
  lam_coeff(n, n) = -eps_h_sq;
  prob.lmi_add_scalar_term(blk, lam, lam_coeff);

  HermitianMatrix gam_coeff = HermitianMatrix::Zero(n + 1, n + 1);
  gam_coeff(n, n) = -1.0;
  prob.lmi_add_scalar_term(blk, gam, gam_coeff);

  prob.set_objective(conic::Sense::maximize, prob.scalar_expr(gam));
  const conic::ConicSolution sol = prob.solve();
  if (sol.status != conic::SolutionStatus::optimal &&
      sol.status != conic::SolutionStatus::inaccurate) {
    throw std::runtime_error("worst_mismatch_dt: dual SDP failed");
  }
  out.lambda = sol.scalars.at("lambda");
  out.gamma = sol.scalars.at("gamma");

  // Primal recovery with the documented safeguards: clip to the ball,
  // boundary-rescale short recoveries, and probe the near-null direction of
  // (lambda I - Q) when the recovered point is interior.
  const double radius = std::sqrt(eps_h_sq);
  const HermitianMatrix gap =
      out.lambda * HermitianMatrix::Identity(n, n) - q_x;
  ComplexVector e_raw = h_e_est * q_x * pseudo_inverse(gap);
  if (e_raw.norm() > radius) e_raw *= radius / e_raw.norm();

  ComplexVector best = e_raw;
  double best_val = quad_form(h_e_est + e_raw, q_x);
  const auto consider = [&](ComplexVector e) {
    if (e.norm() > radius && e.norm() > 0.0) e *= radius / e.norm();
    const double v = quad_form(h_e_est + e, q_x);
    if (v > best_val) {
      best_val = v;
      best = e;
    }
  };

  if (e_raw.norm() > 1e-9) {
    consider((radius / e_raw.norm()) * e_raw);
  } else {
    consider(radius * top_eigvec_row(q_x));
  }
  if (e_raw.norm() < radius - 1e-12) {
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(hermitize(gap));
    const ComplexVector null_dir = es.eigenvectors().col(0).adjoint();
    const double tau =
        std::sqrt(std::max(0.0, radius * radius - e_raw.squaredNorm()));
    consider(e_raw + tau * null_dir);
    consider(e_raw - tau * null_dir);
  }

  out.e = best;
  out.value = best_val;
  return out;
}

SchemeResult gev_beamformer_dt(const ChannelSet& ch,
                               const SystemParams& params,
                               const ComplexVector& e_h) {
  const int n = params.n_a;
  ComplexVector h_e = ch.h_e_est;
  if (e_h.size() > 0) h_e += e_h;

  PencilPair pencil;
  pencil.a = params.sigma_sq * HermitianMatrix::Identity(n, n) +
             params.p_s * outer(ch.h_b);
  pencil.b = params.sigma_sq * HermitianMatrix::Identity(n, n) +
             params.p_s * outer(h_e);
  const GenEig ge = max_generalized_eigvec(pencil);

  SchemeResult r;
  r.q_x = params.p_s * hermitize(ge.vector.adjoint() * ge.vector);
  r.q_z = HermitianMatrix::Zero(params.n_h, params.n_h);
  r.secrecy_rate_bits = std::max(0.0, std::log2(ge.value));
  r.worst_mismatch.e_h = e_h.size() > 0
                             ? e_h
                             : static_cast<ComplexVector>(
                                   ComplexVector::Zero(n));
  r.worst_mismatch.e_g = ComplexVector::Zero(params.n_h);
  r.eve_metric = eve_sinr(ch, r.q_x, r.q_z, r.worst_mismatch, params.sigma_sq);
  r.bob_metric = bob_sinr(ch, r.q_x, r.q_z, params.sigma_sq);
  r.iterations = 1;
  r.q_x_spectrum = eigenvalues_desc(r.q_x);
  return r;
}

SchemeResult nonrobust_dt_worst_case(const ChannelSet& ch,
                                     const SystemParams& params) {
  SchemeResult r = gev_beamformer_dt(ch, params, ComplexVector());
  const WorstMismatchDt wm =
      worst_mismatch_dt(r.q_x, ch.h_e_est, params.eps_h_sq);
  r.worst_mismatch.e_h = wm.e;
  r.secrecy_rate_bits =
      secrecy_rate_dt(ch, r.q_x, wm.e, params.sigma_sq);
  r.eve_metric = eve_sinr(ch, r.q_x, r.q_z, r.worst_mismatch, params.sigma_sq);
  r.bob_metric = bob_sinr(ch, r.q_x, r.q_z, params.sigma_sq);
  return r;
}

double worst_case_eve_power_lmi(const HermitianMatrix& q_x,
                                const ComplexVector& h_e_est, double eps_h_sq,
                                double sigma_sq) {
  const int n = static_cast<int>(h_e_est.cols());
  conic::ConicProblem prob;
  const int v = prob.add_scalar("v", conic::VarSign::free);
  const int mu = prob.add_scalar("mu", conic::VarSign::nonneg);
  const int blk = prob.add_lmi_block(n + 1);

  HermitianMatrix f0 = HermitianMatrix::Zero(n + 1, n + 1);
  f0.topLeftCorner(n, n) = -q_x;
  f0.block(0, n, n, 1) = -q_x * h_e_est.adjoint();
  f0.block(n, 0, 1, n) = -h_e_est * q_x;
  f0(n, n) = -quad_form(h_e_est, q_x) - sigma_sq;
  prob.lmi_add_const(blk, hermitize(f0));

  HermitianMatrix mu_coeff = HermitianMatrix::Identity(n + 1, n + 1);
  mu_coeff(n, n) = -eps_h_sq;
  prob.lmi_add_scalar_term(blk, mu, mu_coeff);

  HermitianMatrix v_coeff = HermitianMatrix::Zero(n + 1, n + 1);
  v_coeff(n, n) = 1.0;
  prob.lmi_add_scalar_term(blk, v, v_coeff);

  prob.set_objective(conic::Sense::minimize, prob.scalar_expr(v));
  const conic::ConicSolution sol = prob.solve();
  if (sol.status != conic::SolutionStatus::optimal &&
      sol.status != conic::SolutionStatus::inaccurate) {
    throw std::runtime_error("worst_case_eve_power_lmi: SDP failed");
  }
  return sol.objective_value;
}

}  // namespace wiretap
