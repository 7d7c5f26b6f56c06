#pragma once
// Worst-case secrecy-rate maximization for direct (no-jamming) transmission
// under a norm-bounded eavesdropper channel error, plus the closed-form
// pieces used around it: the dominant-pencil beamformer baseline and the
// worst-mismatch extraction for a fixed covariance.
//
// The robust design minimizes, over transmit covariances, the worst-case
// ratio of eavesdropper received power to legitimate received power.  The
// inner worst case over the error ball is absorbed by an S-procedure into a
// linear matrix inequality, which makes the feasibility question at a fixed
// ratio t an LMI problem; the quasiconvex outer problem is then solved by
// bisection on t.  The same core serves the jamming-aware variant, which only
// changes the additive constants on the two sides of the ratio.

#include "wiretap/conic.hpp"
#include "wiretap/model.hpp"

namespace wiretap {

// Result of the shared quasiconvex ratio minimization.
struct RatioDesign {
  HermitianMatrix q_x;
  double t_star = 1.0;  // minimized worst-case power ratio (eve over bob)
  double mu = 0.0;      // S-procedure multiplier at the final point
  int iterations = 0;
  SolveStatus status = SolveStatus::optimal;
};

// Minimizes over feasible covariances (trace at most p_s, PSD) the worst-case
// ratio
//     (eve_const + sup over the error ball of (h_e_est+e) Q (h_e_est+e)^H)
//     / (bob_const + h_b Q h_b^H)
// by LMI-feasibility bisection; delta is the bisection width on t.  Both
// additive constants are in noise-power units; direct transmission passes
// sigma_sq for both.
RatioDesign maximize_worst_case_ratio(const ComplexVector& h_b,
                                      const ComplexVector& h_e_est,
                                      double eps_h_sq, double p_s,
                                      double bob_const, double eve_const,
                                      double delta, int max_iter = 60);

// Single strict-feasibility probe of the bisection oracle at ratio t, for
// certificate checks around a computed optimum.
bool worst_case_ratio_feasible(const ComplexVector& h_b,
                               const ComplexVector& h_e_est, double eps_h_sq,
                               double p_s, double bob_const, double eve_const,
                               double t);

// Robust direct transmission.  Reported rate is log2(1 / t_star) clamped at
// zero; the worst mismatch and SINR fields are filled from the extracted
// covariance.
SchemeResult solve_robust_dt(const ChannelSet& ch, const SystemParams& params,
                             double delta = 1e-4);

// Worst error for a fixed transmit covariance: the maximizer of
// (h_e_est + e) q_x (h_e_est + e)^H over |e|^2 <= eps_h_sq, recovered from
// the dual trust-region SDP.  gamma is the SDP objective (the negated
// worst-case received power); value is the attained primal power.
struct WorstMismatchDt {
  ComplexVector e;
  double lambda = 0.0;
  double gamma = 0.0;
  double value = 0.0;
};

WorstMismatchDt worst_mismatch_dt(const HermitianMatrix& q_x,
                                  const ComplexVector& h_e_est,
                                  double eps_h_sq);

// Dominant generalized eigenvector beamformer for a presumed-exact
// eavesdropper channel h_e_est + e_h: full-power rank-one covariance along
// the pencil (sigma^2 I + p_s h_b^H h_b, sigma^2 I + p_s h_e^H h_e).
SchemeResult gev_beamformer_dt(const ChannelSet& ch,
                               const SystemParams& params,
                               const ComplexVector& e_h);

// Non-robust baseline: design on the channel estimate, then evaluate at the
// worst mismatch for the resulting covariance.
SchemeResult nonrobust_dt_worst_case(const ChannelSet& ch,
                                     const SystemParams& params);

// S-procedure value of  sigma_sq + sup over the ball of Eve received power
// for a fixed covariance, as a single LMI minimization.  Used to cross-check
// the sampling search and the bisection oracle.
double worst_case_eve_power_lmi(const HermitianMatrix& q_x,
                                const ComplexVector& h_e_est, double eps_h_sq,
                                double sigma_sq);

}  // namespace wiretap
