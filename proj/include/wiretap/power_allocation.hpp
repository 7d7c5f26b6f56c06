#pragma once
// Global power allocation between the information source and the helper
// under a shared budget p1 + p2 <= P.  At fixed covariance shapes and fixed
// channel mismatches the worst-case secrecy rate is a monotone transform of
// the quadratic-fractional split objective
//
//   F(p1, p2) = (p1 p2 c1 c3 + p1 c1 s2 + p2 c3 s2 + s2^2)
//               / (p1 c2 + p2 c3 + s2),        s2 = noise power,
//
// whose numerator is a posynomial.  Each round replaces the numerator by
// its best local monomial under-estimator (arithmetic-geometric mean
// inequality), which turns the problem into a geometric program that is
// convex in log variables and is solved exactly here by stationary-point
// enumeration.  Iterating the condensation climbs F monotonically to a
// KKT point; an outer loop alternates this power reallocation with
// re-solves of the covariance designs at the current budgets.

#include "wiretap/model.hpp"
#include "wiretap/robust_cj.hpp"

#include <array>
#include <vector>

namespace wiretap {

// A power split under a shared budget: p1 for the source, p2 for the helper.
struct PowerSplit {
  double p1 = 0.0;
  double p2 = 0.0;
  double budget = 0.0;  // p1 + p2 <= budget
};

// Channel-quality constants of the split objective, quadratic forms in
// trace-normalized covariances:
//   c1 = h_b Qx_bar h_b^H                      (receiver signal gain)
//   c2 = (h_e_est + e_h) Qx_bar (...)^H        (eavesdropper signal gain)
//   c3 = (g_e_est + e_g) Qz_bar (...)^H        (eavesdropper jamming gain)
struct SplitConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

// Monomial under-estimator of the split numerator
//   f(p1, p2) = p1 p2 c1 c3 + p1 c1 s2 + p2 c3 s2 + s2^2
// anchored at an expansion point: alpha holds the four term weights
// u_i / f (they sum to one), and the under-estimator is
//   f_mono(p1, p2) = prod_i (u_i(p1, p2) / alpha_i)^{alpha_i},
// with factors whose alpha_i is zero contributing one.  f_mono <= f
// everywhere with equality at the expansion point.
struct CondensationState {
  SplitConstants c;
  double sigma_sq = 1.0;
  std::array<double, 4> alpha{};  // term weights at the expansion point
  double f_value = 0.0;           // f at the expansion point
};

// Quadratic forms of the trace-normalized covariances against the receiver
// channel and the mismatched eavesdropper channels.  Empty mismatch vectors
// mean zero error.  Covariances whose trace differs from one by more than
// 1e-9 are rejected.
SplitConstants compute_constants(const ChannelSet& ch,
                                 const HermitianMatrix& q_x_norm,
                                 const HermitianMatrix& q_z_norm,
                                 const MismatchPair& mm);

// The split objective F above.  Equals s2 * 2^rate for the zero-forced
// jamming model at fixed shapes and mismatches, so maximizing it maximizes
// the secrecy rate over the split.
double objective_ratio(const PowerSplit& s, const SplitConstants& c,
                       double sigma_sq);

// Best local monomial under-estimator of the numerator at the given point.
CondensationState condense(const PowerSplit& s, const SplitConstants& c,
                           double sigma_sq);

// Value of the condensed monomial at an arbitrary point (test hook for the
// global under-estimator property).
double condensed_numerator(const CondensationState& state, double p1,
                           double p2);

// Exact global solution of the condensed program
//   min (p1 c2 + p2 c3 + s2) / f_mono(p1, p2)   s.t.  p1 + p2 <= budget,
// convex in log variables; solved by enumerating the stationary points of
// every KKT configuration (interior, budget line, edges, corner) in closed
// form, with the domain floored at p_i >= 1e-8 * budget to keep the logs
// finite and a final polish that returns exact zeros when a variable's
// monomial exponent vanishes.  Degenerate constants (c2 = 0 or c3 = 0)
// collapse the true ratio and are answered directly with the boundary
// allocation that maximizes it.
PowerSplit solve_condensed_gp(const CondensationState& state, double budget,
                              double sigma_sq);

struct PowerAllocResult {
  PowerSplit split;
  double objective = 0.0;     // split objective at the returned point
  std::vector<double> trace;  // objective after every accepted iterate
  int iterations = 0;
  SolveStatus status = SolveStatus::optimal;
};

// Successive condensation: condense at the current point, solve the
// condensed program, repeat until the relative objective change drops
// below tol or max_iter rounds pass.  The under-estimator property makes
// the recorded objective sequence non-decreasing.
PowerAllocResult single_condensation_loop(const PowerSplit& initial,
                                          const SplitConstants& c,
                                          double sigma_sq, double tol = 1e-5,
                                          int max_iter = 50);

// Joint covariance-and-power optimization under the shared budget
// params.p_total: starting from the even split, alternately (a) re-solve
// the robust jamming design, its worst mismatch, and the robust transmit
// design at the current budgets, and (b) reallocate the budget by
// successive condensation at the refreshed shapes and mismatches, until
// the worst-case secrecy rate changes by less than outer_tol bits or
// outer_max rounds pass.  The recorded rate trace is non-decreasing: a
// refresh that would lower the rate terminates the loop with the previous
// iterate instead of being accepted.
SchemeResult joint_optimize_global(
    const ChannelSet& ch, const SystemParams& params, double delta = 1e-6,
    double outer_tol = 1e-4, int outer_max = 30,
    JammingRatioForm form = JammingRatioForm::eve_denominator);

}  // namespace wiretap
