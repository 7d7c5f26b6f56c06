#pragma once
// Quality-of-service designs: minimize the worst-case eavesdropper SINR
// subject to a floor gamma_t on the receiver's SINR, under the shared power
// budget p_total.
//
// Direct transmission admits a single semidefinite program (no bisection):
// the worst-case eavesdropper power is the S-procedure certificate
//   mu eps_h^2 + h_e (Q_x + Psi) h_e^H,   Psi >= Q_x (mu I - Q_x)^+ Q_x,
// which is linear in (Q_x, mu, psi) once the pseudo-inverse term is folded
// into a bordered positive-semidefinite block with a scalar slack.  The
// cooperative variant couples a jamming covariance through the receiver
// constraint  h_b Q_x h_b^H >= gamma_t (g_b Q_z g_b^H + sigma^2)  and a
// linear-fractional objective (worst eavesdropper signal over worst
// eavesdropper noise), solved by bisection over certificate feasibility
// problems; no zero-forcing constraint is imposed on the jamming.
//
// Every solver reports outage when the floor is unreachable: even the
// full-budget maximum-ratio beam caps the receiver SINR at
// p_total |h_b|^2 / sigma^2.

#include "wiretap/model.hpp"

namespace wiretap {

// Eavesdropper-power minimizing design on the channel estimate, with the
// transmit power itself minimized as a secondary objective (among designs
// whose estimated eavesdropper power is optimal, the cheapest one is
// returned, so a cooperative baseline can spend the remaining budget on
// jamming).  Reported metrics are evaluated at the worst-case mismatch of
// the returned covariance.
SchemeResult solve_qos_dt_nonrobust(const ChannelSet& ch,
                                    const SystemParams& params);

// Worst-case eavesdropper-power minimizing design over the mismatch ball,
// as a single semidefinite program.
SchemeResult solve_qos_dt_robust(const ChannelSet& ch,
                                 const SystemParams& params);

// Closed-form relaxation: steer a rank-one beam along the projection of the
// receiver channel away from the estimated eavesdropper channel (exactly
// zero estimated leakage), scaled so the receiver SINR equals gamma_t.
// Outage when the channels are parallel or the required power exceeds the
// budget.
SchemeResult relaxed_zf_qos(const ChannelSet& ch, const SystemParams& params);

// Joint information-and-jamming design minimizing the worst-case
// eavesdropper SINR under the shared budget and the receiver floor, by
// bisection on the SINR level over S-procedure feasibility programs.
// delta is the absolute bisection tolerance on the SINR level.
// rate_trace holds the accepted (feasible) levels in probe order; its last
// entry is the certified level the bisection stopped at, reproducible
// through qos_cj_level_feasible below.
// force_zero_jamming restricts the search to designs with no helper power
// (test hook for the reduction to the direct-transmission program).
SchemeResult solve_qos_cj_robust(const ChannelSet& ch,
                                 const SystemParams& params,
                                 double delta = 1e-7,
                                 bool force_zero_jamming = false);

// Cooperative baseline designed on the estimates: the information
// covariance solves the estimated-channel program above at minimal power,
// and the helper spends the remaining budget on null-steering jamming.
// Metrics are evaluated at the worst-case mismatches of the result.
SchemeResult solve_qos_cj_nonrobust(const ChannelSet& ch,
                                    const SystemParams& params);

// The bisection oracle behind solve_qos_cj_robust: whether a joint design
// exists whose certified worst-case eavesdropper SINR is at most t.  Exposed
// so tests can check the convergence certificate directly (feasible at the
// returned level, infeasible a few tolerances below it).
bool qos_cj_level_feasible(const ChannelSet& ch, const SystemParams& params,
                           double t, bool force_zero_jamming = false);

}  // namespace wiretap
