#include "wiretap/robust_cj.hpp"

#include "wiretap/conic.hpp"
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

// Orthonormal basis of the complement of span(g_b^H), as matrix columns.
// For PSD matrices, the zero-forcing equality g_b q_z g_b^H = 0 holds
// exactly when q_z = V S V^H with S PSD over this basis, so optimizing S
// imposes zero forcing exactly; the direct inequality formulation caps the
// constraint slack at the strict-feasibility resolution of the barrier
// backend and is rejected as lacking an interior.
Eigen::MatrixXcd zf_basis(const ComplexVector& g_b) {
  const int n = static_cast<int>(g_b.cols());
  if (g_b.norm() < 1e-14) return Eigen::MatrixXcd::Identity(n, n);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g_b.adjoint());
  const Eigen::MatrixXcd full = qr.householderQ();
  return full.rightCols(n - 1);
}

}  // namespace

JammingDesign solve_robust_jamming(const ChannelSet& ch,
                                   const SystemParams& params) {
  const int n = params.n_h;
  const double eps = params.eps_g_sq;
  JammingDesign out;
  out.q_z = HermitianMatrix::Zero(n, n);

  const Eigen::MatrixXcd v = zf_basis(ch.g_b);
  const int m = static_cast<int>(v.cols());
  if (m == 0) return out;  // single-antenna helper: zero forcing leaves nothing
  if (params.p_j <= kEpsDegenerate) return out;  // no jamming budget
  // Jamming power only sees the component of the channel inside the basis,
  // and the mismatch ball maps onto the reduced ball of the same radius, so
  // the reduced problem is an exact restatement, not a relaxation.
  const ComplexVector g_red = ch.g_e_est * v;

  conic::ConicProblem prob;
  const int s = prob.add_hermitian("s", m);
  prob.add_psd(s);
  prob.add_ineq(prob.trace(s), params.p_j);

  conic::LinExpr obj = prob.trace_product(s, outer(g_red));
  if (eps > kEpsDegenerate) {
    // Worst-case jamming power over the ball, certified from below through
    // the multiplier mu and the Schur-complement slack psi:
    //   min over the ball >= g~ S g~^H - mu eps^2 - psi,
    //   [[mu I + S, S g~^H], [g~ S, psi]] >= 0.
    // The matrix-slack variant (Psi coupled as [[Psi, S],[S, mu I + S]])
    // certifies the same set but leaves Psi unbounded off g~; see the ratio
    // oracle note in robust_dt.cpp.
    const int mu = prob.add_scalar("mu", conic::VarSign::nonneg);
    const int psi = prob.add_scalar("psi", conic::VarSign::free);
    // Growing mu or psi only ever enlarges the LMI, so without upper bounds
    // the phase I barrier has no center.  At any optimum both are dominated
    // by the attainable jamming power (psi <= g~ S g~^H <= P_J |g~|^2 and
    // mu eps^2 <= g~ S g~^H), so these caps never bind at the solution.
    const double scale = params.p_j * g_red.squaredNorm();
    prob.add_ineq(prob.scalar_expr(mu),
                  1.0 + 4.0 * std::min(1e8, scale / eps));
    prob.add_ineq(prob.scalar_expr(psi), 1.0 + 4.0 * scale);
    const int blk = prob.add_lmi_block(m + 1);
    prob.lmi_add_matrix_term(blk, s, 0, 0, 1.0);
    HermitianMatrix mu_coeff = HermitianMatrix::Zero(m + 1, m + 1);
    mu_coeff.topLeftCorner(m, m) = HermitianMatrix::Identity(m, m);
    prob.lmi_add_scalar_term(blk, mu, mu_coeff);
    prob.lmi_add_vector_term(blk, s, g_red, 0, m, 1.0);
    HermitianMatrix psi_coeff = HermitianMatrix::Zero(m + 1, m + 1);
    psi_coeff(m, m) = 1.0;
    prob.lmi_add_scalar_term(blk, psi, psi_coeff);

    obj += prob.scalar_expr(psi, -1.0);
    obj += prob.scalar_expr(mu, -eps);
  }
  prob.set_objective(conic::Sense::maximize, obj);

  const conic::ConicSolution sol = prob.solve();
  if (sol.status != conic::SolutionStatus::optimal) {
    out.status = SolveStatus::solver_failure;
    return out;
  }
  out.q_z = hermitize(v * sol.matrices.at("s") * v.adjoint());
  out.objective = sol.objective_value;
  if (eps > kEpsDegenerate) out.mu = sol.scalars.at("mu");
  return out;
}

WorstMismatchCj worst_mismatch_cj(const HermitianMatrix& q_z,
                                  const ComplexVector& g_e_est,
                                  double eps_g_sq) {
  const int n = static_cast<int>(g_e_est.cols());
  WorstMismatchCj out;
  out.e = ComplexVector::Zero(n);
  out.value = quad_form(g_e_est, q_z);

  if (eps_g_sq <= kEpsDegenerate) {
    // Degenerate ball: the dual supremum is approached as the multiplier
    // grows without bound, so report the limit directly.
    out.lambda = std::numeric_limits<double>::infinity();
    out.gamma = out.value;
    return out;
  }
  if (q_z.norm() <= kEpsDegenerate) {
    // Zero covariance: the quadratic form vanishes for every mismatch.
    out.value = 0.0;
    out.gamma = 0.0;
    return out;
  }

  // Dual trust-region SDP: maximize gamma subject to
  //   [[lambda I + Q, Q g^H], [g Q, g Q g^H - lambda eps^2 - gamma]] PSD.
  // The inner problem is convex, so gamma matches the primal minimum.
  conic::ConicProblem prob;
  const int lam = prob.add_scalar("lambda", conic::VarSign::nonneg);
  const int gam = prob.add_scalar("gamma", conic::VarSign::free);
  const int blk = prob.add_lmi_block(n + 1);

  HermitianMatrix f0 = HermitianMatrix::Zero(n + 1, n + 1);
  f0.topLeftCorner(n, n) = q_z;
  f0.block(0, n, n, 1) = q_z * g_e_est.adjoint();
  f0.block(n, 0, 1, n) = g_e_est * q_z;
  f0(n, n) = quad_form(g_e_est, q_z);
  prob.lmi_add_const(blk, hermitize(f0));

  HermitianMatrix lam_coeff = HermitianMatrix::Identity(n + 1, n + 1);
  lam_coeff(n, n) = -eps_g_sq;
  prob.lmi_add_scalar_term(blk, lam, lam_coeff);

  HermitianMatrix gam_coeff = HermitianMatrix::Zero(n + 1, n + 1);
  gam_coeff(n, n) = -1.0;
  prob.lmi_add_scalar_term(blk, gam, gam_coeff);

  prob.set_objective(conic::Sense::maximize, prob.scalar_expr(gam));
  const conic::ConicSolution sol = prob.solve();
  if (sol.status != conic::SolutionStatus::optimal &&
      sol.status != conic::SolutionStatus::inaccurate) {
    throw std::runtime_error("worst_mismatch_cj: dual SDP failed");
  }
  out.lambda = sol.scalars.at("lambda");
  out.gamma = sol.scalars.at("gamma");

  // Stationarity recovery e = -g (lambda I + Q)^{-1} Q.  The shift matrix is
  // PD whenever lambda > 0; it degrades only when a near-zero multiplier
  // meets a singular Q, where the pseudo-inverse picks the minimum-norm
  // minimizer.
  const double radius = std::sqrt(eps_g_sq);
  const HermitianMatrix gap =
      out.lambda * HermitianMatrix::Identity(n, n) + q_z;
  const std::vector<double> gap_ev = eigenvalues_desc(gap);
  ComplexVector e_raw;
  if (gap_ev.back() > 1e-12 * (1.0 + gap_ev.front())) {
    e_raw = ComplexVector(
        (-gap.ldlt().solve(q_z * g_e_est.adjoint())).adjoint());
  } else {
    e_raw = -(g_e_est * q_z * pseudo_inverse(gap));
  }
  if (e_raw.norm() > radius) e_raw *= radius / e_raw.norm();
  out.e = e_raw;
  out.value = quad_form(g_e_est + e_raw, q_z);
  return out;
}

ComplexVector null_steering(const ComplexVector& g_b,
                            const ComplexVector& g_e) {
  const HermitianMatrix proj = null_projector(g_b);
  const Eigen::VectorXcd w_col = proj * g_e.adjoint();
  const double nrm = w_col.norm();
  if (nrm <= 1e-9 * g_e.norm()) {
    throw std::invalid_argument(
        "null_steering: eavesdropper channel is parallel to the receiver "
        "channel");
  }
  return ComplexVector(w_col.adjoint() / nrm);
}

bool verify_rank_one(const HermitianMatrix& q_z, double tol) {
  const std::vector<double> ev = eigenvalues_desc(q_z);
  if (ev.empty() || ev.front() <= 0.0) return false;
  if (ev.size() == 1) return true;
  return ev[1] <= tol * ev[0];
}

SchemeResult solve_qx_given_jamming(const ChannelSet& ch,
                                    const SystemParams& params,
                                    const HermitianMatrix& q_z,
                                    const ComplexVector& e_g, double delta,
                                    JammingRatioForm form) {
  SchemeResult r;
  r.q_x = HermitianMatrix::Zero(params.n_a, params.n_a);
  r.q_z = q_z;

  ComplexVector g_e = ch.g_e_est;
  if (e_g.size() > 0) g_e += e_g;
  const double jam_power = quad_form(g_e, q_z);
  const bool in_numerator = form == JammingRatioForm::numerator_constant;
  const double bob_const =
      params.sigma_sq + (in_numerator ? jam_power : 0.0);
  const double eve_const =
      params.sigma_sq + (in_numerator ? 0.0 : jam_power);

  const RatioDesign core =
      maximize_worst_case_ratio(ch.h_b, ch.h_e_est, params.eps_h_sq,
                                params.p_s, bob_const, eve_const, delta);
  r.iterations = core.iterations;
  r.status = core.status;
  if (core.status == SolveStatus::solver_failure) return r;
  r.q_x = core.q_x;

  // The two mismatches decouple in the worst-case rate: e_h maximizes Eve's
  // signal power, e_g (fixed by the caller) minimizes Eve's jamming noise.
  const WorstMismatchDt wm_h =
      worst_mismatch_dt(r.q_x, ch.h_e_est, params.eps_h_sq);
  r.worst_mismatch.e_h = wm_h.e;
  r.worst_mismatch.e_g =
      e_g.size() > 0 ? e_g
                     : static_cast<ComplexVector>(
                           ComplexVector::Zero(params.n_h));
  r.secrecy_rate_bits =
      secrecy_rate_cj(ch, r.q_x, r.q_z, r.worst_mismatch, params.sigma_sq);
  r.eve_metric = eve_sinr(ch, r.q_x, r.q_z, r.worst_mismatch, params.sigma_sq);
  r.bob_metric = bob_sinr(ch, r.q_x, r.q_z, params.sigma_sq);
  r.q_x_spectrum = eigenvalues_desc(r.q_x);
  return r;
}

SchemeResult solve_robust_cj(const ChannelSet& ch, const SystemParams& params,
                             double delta, JammingRatioForm form) {
  const JammingDesign jam = solve_robust_jamming(ch, params);
  if (jam.status != SolveStatus::optimal) {
    SchemeResult r;
    r.q_x = HermitianMatrix::Zero(params.n_a, params.n_a);
    r.q_z = jam.q_z;
    r.status = SolveStatus::solver_failure;
    return r;
  }
  const WorstMismatchCj wm_g =
      worst_mismatch_cj(jam.q_z, ch.g_e_est, params.eps_g_sq);
  return solve_qx_given_jamming(ch, params, jam.q_z, wm_g.e, delta, form);
}

SchemeResult nonrobust_cj_worst_case(const ChannelSet& ch,
                                     const SystemParams& params) {
  const int n = params.n_a;
  const ComplexVector w = null_steering(ch.g_b, ch.g_e_est);
  const HermitianMatrix q_z = params.p_j * outer(w);
  const double sigma_z_sq = params.sigma_sq + quad_form(ch.g_e_est, q_z);

  PencilPair pencil;
  pencil.a = params.sigma_sq * HermitianMatrix::Identity(n, n) +
             params.p_s * outer(ch.h_b);
  pencil.b = sigma_z_sq * HermitianMatrix::Identity(n, n) +
             params.p_s * outer(ch.h_e_est);
  const GenEig ge = max_generalized_eigvec(pencil);

  SchemeResult r;
  r.q_x = params.p_s * outer(ge.vector);
  r.q_z = q_z;
  const WorstMismatchDt wm_h =
      worst_mismatch_dt(r.q_x, ch.h_e_est, params.eps_h_sq);
  const WorstMismatchCj wm_g =
      worst_mismatch_cj(q_z, ch.g_e_est, params.eps_g_sq);
  r.worst_mismatch.e_h = wm_h.e;
  r.worst_mismatch.e_g = wm_g.e;
  r.secrecy_rate_bits =
      secrecy_rate_cj(ch, r.q_x, r.q_z, r.worst_mismatch, params.sigma_sq);
  r.eve_metric = eve_sinr(ch, r.q_x, r.q_z, r.worst_mismatch, params.sigma_sq);
  r.bob_metric = bob_sinr(ch, r.q_x, r.q_z, params.sigma_sq);
  r.iterations = 1;
  r.q_x_spectrum = eigenvalues_desc(r.q_x);
  return r;
}

}  // namespace wiretap
