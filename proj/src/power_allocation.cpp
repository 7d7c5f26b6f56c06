// Global power allocation by successive condensation, and the outer joint
// loop that alternates covariance refreshes with budget reallocation.
//
// The split objective F = f / N has a posynomial numerator
//   f(p1, p2) = p1 p2 c1 c3 + p1 c1 s2 + p2 c3 s2 + s2^2
// and an affine denominator N = p1 c2 + p2 c3 + s2.  Condensing f at a
// point replaces it with the monomial K p1^a p2^b (a, b in [0, 1)), and the
// condensed program  min N / (K p1^a p2^b)  on the budget triangle is a
// geometric program: convex in log variables.  Its KKT system is small
// enough to enumerate in closed form:
//   interior:    c2 p1 / N = a, c3 p2 / N = b  =>  N (1 - a - b) = s2;
//   budget line: stationarity reduces to a real quadratic in p1;
//   edges:       one-variable stationary points in closed form;
// so each condensed solve is exact, not iterative.

#include "wiretap/power_allocation.hpp"

#include "wiretap/linalg.hpp"
#include "wiretap/robust_cj.hpp"
#include "wiretap/robust_dt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace wiretap {
namespace {

constexpr double kZeroExponent = 1e-14;  // treat a monomial exponent as zero
constexpr double kTraceTol = 1e-9;       // normalization check tolerance

double floor_of(double budget) { return 1e-8 * budget; }

// Minimization surrogate of the condensed program in original variables:
//   phi(p1, p2) = ln N - a ln p1 - b ln p2  (the constant -ln K is dropped).
double phi(double p1, double p2, double a, double b, const SplitConstants& c,
           double sigma_sq) {
  const double n = c.c2 * p1 + c.c3 * p2 + sigma_sq;
  double v = std::log(n);
  if (a > kZeroExponent) v -= a * std::log(p1);
  if (b > kZeroExponent) v -= b * std::log(p2);
  return v;
}

ComplexVector shifted(const ComplexVector& est, const ComplexVector& e) {
  if (e.size() == 0) return est;
  return est + e;
}

}  // namespace

SplitConstants compute_constants(const ChannelSet& ch,
                                 const HermitianMatrix& q_x_norm,
                                 const HermitianMatrix& q_z_norm,
                                 const MismatchPair& mm) {
  if (std::abs(q_x_norm.trace().real() - 1.0) > kTraceTol ||
      std::abs(q_z_norm.trace().real() - 1.0) > kTraceTol)
    throw std::invalid_argument(
        "compute_constants expects trace-normalized covariances");
  SplitConstants c;
  c.c1 = quad_form(ch.h_b, q_x_norm);
  c.c2 = quad_form(shifted(ch.h_e_est, mm.e_h), q_x_norm);
  c.c3 = quad_form(shifted(ch.g_e_est, mm.e_g), q_z_norm);
  return c;
}

double objective_ratio(const PowerSplit& s, const SplitConstants& c,
                       double sigma_sq) {
  const double f = s.p1 * s.p2 * c.c1 * c.c3 + s.p1 * c.c1 * sigma_sq +
                   s.p2 * c.c3 * sigma_sq + sigma_sq * sigma_sq;
  const double n = s.p1 * c.c2 + s.p2 * c.c3 + sigma_sq;
  return f / n;
}

CondensationState condense(const PowerSplit& s, const SplitConstants& c,
                           double sigma_sq) {
  CondensationState st;
  st.c = c;
  st.sigma_sq = sigma_sq;
  const std::array<double, 4> u = {s.p1 * s.p2 * c.c1 * c.c3,
                                   s.p1 * c.c1 * sigma_sq,
                                   s.p2 * c.c3 * sigma_sq,
                                   sigma_sq * sigma_sq};
  st.f_value = u[0] + u[1] + u[2] + u[3];
  for (int i = 0; i < 4; ++i) st.alpha[i] = u[i] / st.f_value;
  return st;
}

double condensed_numerator(const CondensationState& state, double p1,
                           double p2) {
  const SplitConstants& c = state.c;
  const double s2 = state.sigma_sq;
  const std::array<double, 4> u = {p1 * p2 * c.c1 * c.c3, p1 * c.c1 * s2,
                                   p2 * c.c3 * s2, s2 * s2};
  double log_acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double a = state.alpha[i];
    if (a <= kZeroExponent) continue;  // limit of (u/a)^a as a -> 0 is 1
    if (u[i] <= 0.0) return 0.0;
    log_acc += a * (std::log(u[i]) - std::log(a));
  }
  return std::exp(log_acc);
}

PowerSplit solve_condensed_gp(const CondensationState& state, double budget,
                              double sigma_sq) {
  PowerSplit out;
  out.budget = budget;
  if (budget <= 0.0) return out;
  const SplitConstants& c = state.c;

  // Degenerate constants collapse the true ratio; answer them directly.
  if (c.c2 <= 0.0) {
    // F = p1 c1 + s2 for every p2: the source takes the whole budget.
    out.p1 = budget;
    return out;
  }
  if (c.c3 <= 0.0) {
    // F = s2 (p1 c1 + s2) / (p1 c2 + s2), monotone with sign(c1 - c2).
    out.p1 = c.c1 > c.c2 ? budget : 0.0;
    return out;
  }

  const double a = state.alpha[0] + state.alpha[1];  // p1 exponent
  const double b = state.alpha[0] + state.alpha[2];  // p2 exponent
  const double p_min = floor_of(budget);
  const double hi = budget - p_min;

  std::vector<std::pair<double, double>> cand;
  cand.emplace_back(p_min, p_min);
  cand.emplace_back(p_min, hi);
  cand.emplace_back(hi, p_min);

  // Interior stationary point: N (1 - a - b) = s2.
  if (a > kZeroExponent && b > kZeroExponent && a + b < 1.0 - 1e-12) {
    const double n_star = sigma_sq / (1.0 - a - b);
    cand.emplace_back(a * n_star / c.c2, b * n_star / c.c3);
  }

  // Budget line p2 = budget - p1: stationarity clears denominators into
  //   q (a + b - 1) p1^2 + (q P (1 - a) + r (a + b)) p1 - a r P = 0
  // with q = c2 - c3 and r = c3 P + s2.
  {
    const double q = c.c2 - c.c3;
    const double r = c.c3 * budget + sigma_sq;
    const double qa = q * (a + b - 1.0);
    const double qb = q * budget * (1.0 - a) + r * (a + b);
    const double qc = -a * r * budget;
    const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
    if (std::abs(qa) > 1e-14 * scale) {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        for (const double root : {(-qb + sq) / (2.0 * qa),
                                  (-qb - sq) / (2.0 * qa)}) {
          const double p1 = std::clamp(root, p_min, hi);
          cand.emplace_back(p1, budget - p1);
        }
      }
    } else if (std::abs(qb) > 1e-14 * scale) {
      const double p1 = std::clamp(-qc / qb, p_min, hi);
      cand.emplace_back(p1, budget - p1);
    }
  }

  // Floor edges: the remaining variable's stationary point in closed form.
  if (b < 1.0 - 1e-12) {
    const double p2 =
        std::clamp(b * (c.c2 * p_min + sigma_sq) / ((1.0 - b) * c.c3),
                   p_min, hi);
    cand.emplace_back(p_min, p2);
  }
  if (a < 1.0 - 1e-12) {
    const double p1 =
        std::clamp(a * (c.c3 * p_min + sigma_sq) / ((1.0 - a) * c.c2),
                   p_min, hi);
    cand.emplace_back(p1, p_min);
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& [p1_raw, p2_raw] : cand) {
    const double p1 = std::clamp(p1_raw, p_min, hi);
    const double p2 =
        std::clamp(p2_raw, p_min, std::max(p_min, budget - p1));
    const double v = phi(p1, p2, a, b, c, sigma_sq);
    if (v < best) {
      best = v;
      out.p1 = p1;
      out.p2 = p2;
    }
  }

  // Exact-zero polish: a variable whose monomial exponent vanished only
  // inflates the denominator, so the floor stands in for zero.
  if (a <= kZeroExponent && out.p1 <= 2.0 * p_min) out.p1 = 0.0;
  if (b <= kZeroExponent && out.p2 <= 2.0 * p_min) out.p2 = 0.0;
  return out;
}

PowerAllocResult single_condensation_loop(const PowerSplit& initial,
                                          const SplitConstants& c,
                                          double sigma_sq, double tol,
                                          int max_iter) {
  PowerAllocResult r;
  r.split = initial;
  r.split.p1 = std::clamp(initial.p1, 0.0, initial.budget);
  r.split.p2 =
      std::clamp(initial.p2, 0.0, initial.budget - r.split.p1);
  r.status = SolveStatus::max_iter;

  double prev = objective_ratio(r.split, c, sigma_sq);
  r.trace.push_back(prev);
  for (int k = 0; k < max_iter; ++k) {
    r.iterations = k + 1;
    const CondensationState state = condense(r.split, c, sigma_sq);
    PowerSplit next = solve_condensed_gp(state, initial.budget, sigma_sq);
    const double val = objective_ratio(next, c, sigma_sq);
    if (val < prev) {
      // The under-estimator property forbids a true decrease; stop at the
      // fixed point rather than record numerical noise.
      r.status = SolveStatus::optimal;
      break;
    }
    r.split = next;
    r.trace.push_back(val);
    if (val - prev <= tol * std::max(1.0, std::abs(prev))) {
      prev = val;
      r.status = SolveStatus::optimal;
      break;
    }
    prev = val;
  }
  r.objective = prev;
  return r;
}

SchemeResult joint_optimize_global(const ChannelSet& ch,
                                   const SystemParams& params, double delta,
                                   double outer_tol, int outer_max,
                                   JammingRatioForm form) {
  const double total = params.p_total;
  const int n_h = params.n_h;
  SchemeResult accepted;
  accepted.q_x = HermitianMatrix::Zero(params.n_a, params.n_a);
  accepted.q_z = HermitianMatrix::Zero(n_h, n_h);
  accepted.status = SolveStatus::solver_failure;
  bool have = false;
  std::vector<double> trace;

  double p1 = 0.5 * total;
  double p2 = 0.5 * total;
  const double tiny = 1e-6 * total;

  for (int outer = 0; outer < outer_max; ++outer) {
    // (a) Refresh shapes and worst mismatches at the current budgets.
    SystemParams sub = params;
    sub.p_s = std::max(p1, 1e-8 * total);
    sub.p_j = p2;

    JammingDesign jd;
    jd.q_z = HermitianMatrix::Zero(n_h, n_h);
    if (p2 > tiny) {
      jd = solve_robust_jamming(ch, sub);
      if (jd.status != SolveStatus::optimal) {
        accepted.status = SolveStatus::solver_failure;
        accepted.rate_trace = trace;
        return accepted;
      }
    }
    const WorstMismatchCj wm =
        worst_mismatch_cj(jd.q_z, ch.g_e_est, sub.eps_g_sq);
    SchemeResult sr =
        solve_qx_given_jamming(ch, sub, jd.q_z, wm.e, delta, form);
    if (sr.status != SolveStatus::optimal) {
      accepted.status = SolveStatus::solver_failure;
      accepted.rate_trace = trace;
      return accepted;
    }

    // Monotone safeguard: never accept a refresh that lowers the rate.
    if (have && sr.secrecy_rate_bits < trace.back() - 1e-6) break;
    accepted = sr;
    have = true;
    trace.push_back(sr.secrecy_rate_bits);
    accepted.status = SolveStatus::optimal;
    if (trace.size() >= 2 &&
        std::abs(trace.back() - trace[trace.size() - 2]) < outer_tol)
      break;
    if (outer == outer_max - 1) {
      accepted.status = SolveStatus::max_iter;
      break;
    }

    // (b) Reallocate the budget at the refreshed shapes and mismatches.
    const double t1 = sr.q_x.trace().real();
    const double t2 = jd.q_z.trace().real();
    HermitianMatrix qxn;
    if (t1 > 1e-12 * total) {
      qxn = sr.q_x / t1;
    } else {
      // Rate-zero corner: stand in with the receiver-matched beam.
      qxn = hermitize(ch.h_b.adjoint() * ch.h_b) / ch.h_b.squaredNorm();
    }
    HermitianMatrix qzn;
    bool jamming_possible = n_h > 1;
    if (t2 > 1e-12 * total) {
      qzn = jd.q_z / t2;
    } else if (jamming_possible) {
      // No current jamming: offer the zero-mismatch optimal shape so the
      // allocator can price jamming power honestly.
      try {
        const ComplexVector w = null_steering(ch.g_b, ch.g_e_est);
        qzn = hermitize(w.adjoint() * w);
      } catch (const std::invalid_argument&) {
        jamming_possible = false;
      }
    }
    if (!jamming_possible)
      qzn = HermitianMatrix::Identity(n_h, n_h) / n_h;

    SplitConstants cst = compute_constants(ch, qxn, qzn, sr.worst_mismatch);
    if (!jamming_possible) cst.c3 = 0.0;  // no zero-forced shape exists

    PowerSplit split;
    split.p1 = p1;
    split.p2 = p2;
    split.budget = total;
    const PowerAllocResult pa =
        single_condensation_loop(split, cst, params.sigma_sq);
    p1 = pa.split.p1;
    p2 = pa.split.p2;
  }

  accepted.rate_trace = trace;
  accepted.iterations = static_cast<int>(trace.size());

  // The alternation can stall at a jamming-bearing local optimum.  The pure
  // direct-transmission endpoint (all power to the transmitter) is always a
  // feasible split, so return it instead whenever it does at least as well;
  // ties go to the jamming-free design.
  if (accepted.status == SolveStatus::optimal ||
      accepted.status == SolveStatus::max_iter) {
    SystemParams dt_params = params;
    dt_params.p_s = total;
    dt_params.p_j = 0.0;
    const SchemeResult dt = solve_robust_dt(ch, dt_params, delta);
    if (dt.status == SolveStatus::optimal &&
        dt.secrecy_rate_bits >= accepted.secrecy_rate_bits - 1e-9) {
      SchemeResult out = dt;
      out.q_z = HermitianMatrix::Zero(n_h, n_h);
      out.rate_trace = accepted.rate_trace;
      out.iterations = accepted.iterations;
      return out;
    }
  }
  return accepted;
}

}  // namespace wiretap
