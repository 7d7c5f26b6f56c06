#pragma once
// Robust cooperative jamming under individual power budgets: the worst-case
// zero-forcing jamming covariance, the worst jammer mismatch (a convex
// trust-region problem), the information covariance given the jamming
// design, and the non-robust null-steering baseline.

#include "wiretap/linalg.hpp"
#include "wiretap/model.hpp"

namespace wiretap {

struct JammingDesign {
  HermitianMatrix q_z;
  double objective = 0.0;  // certified worst-case jamming power at Eve
  double mu = 0.0;         // ball multiplier (0 when the radius is zero)
  SolveStatus status = SolveStatus::optimal;
};

// Maximizes the worst-case jamming power received by the eavesdropper over
// the mismatch ball, subject to PSD, trace-at-most-P_J and zero-forcing
// constraints (single SDP, no bisection).  Zero forcing is imposed as
// tr(q_z g_b^H g_b) <= 1e-9; the strict equality has no interior.
JammingDesign solve_robust_jamming(const ChannelSet& ch,
                                   const SystemParams& params);

struct WorstMismatchCj {
  ComplexVector e;
  double lambda = 0.0;
  double gamma = 0.0;  // dual optimum; equals the primal minimum
  double value = 0.0;  // jamming power at the recovered mismatch
};

// Minimizes (g~ + e) q_z (g~ + e)^H over ||e||^2 <= eps_g_sq.  The problem
// is convex, so the dual SDP value gamma matches the primal minimum and the
// stationarity formula e* = -g~ q_z (lambda I + q_z)^{-1} recovers the
// minimizer (pseudo-inverse when lambda = 0 meets a singular q_z).
WorstMismatchCj worst_mismatch_cj(const HermitianMatrix& q_z,
                                  const ComplexVector& g_e_est,
                                  double eps_g_sq);

// Unit-norm helper beamforming row w with g_b w^H = 0 maximizing |g_e w^H|:
// the normalized projection of g_e onto the complement of g_b.  Throws
// std::invalid_argument when the projection vanishes (parallel channels).
ComplexVector null_steering(const ComplexVector& g_b, const ComplexVector& g_e);

// True iff the two largest eigenvalues satisfy lambda_2 <= tol * lambda_1.
// The zero matrix reports false.
bool verify_rank_one(const HermitianMatrix& q_z, double tol);

// Placement of the jamming power seen by Eve inside the information-signal
// ratio.  The published formulation adds it to the numerator constant; the
// ratio derived directly from the rate expression instead grows the
// eavesdropper denominator.  The two disagree whenever jamming is active:
// measured at 10 dB, eps^2 = 1.5, the numerator-constant design loses about
// 0.25 bits of worst-case rate on average and can fall below plain direct
// transmission, while the eve-denominator design dominates direct
// transmission on every paired trial.  The single-solve op keeps the
// published form as its default; the full scheme defaults to the derived
// form, which is the one that reproduces the published behavior.
enum class JammingRatioForm { numerator_constant, eve_denominator };

// Information covariance given a fixed jamming covariance and jammer
// mismatch: reuses the worst-case ratio bisection with the constants set by
// `form`.  The returned secrecy rate is the cooperative-jamming rate
// evaluated at the joint worst-case mismatches (which decouple: e_h
// maximizes Eve's signal, e_g minimizes Eve's jamming noise).
SchemeResult solve_qx_given_jamming(
    const ChannelSet& ch, const SystemParams& params,
    const HermitianMatrix& q_z, const ComplexVector& e_g, double delta,
    JammingRatioForm form = JammingRatioForm::numerator_constant);

// Full robust cooperative-jamming scheme under individual budgets: jamming
// covariance, worst jammer mismatch, then the information covariance.
SchemeResult solve_robust_cj(
    const ChannelSet& ch, const SystemParams& params, double delta,
    JammingRatioForm form = JammingRatioForm::eve_denominator);

// Non-robust baseline: null-steering jammer at full power and the pencil
// beamformer, both designed on the estimated channels and evaluated at their
// worst-case mismatches.
SchemeResult nonrobust_cj_worst_case(const ChannelSet& ch,
                                     const SystemParams& params);

}  // namespace wiretap
