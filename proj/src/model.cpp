#include "wiretap/model.hpp"

#include <cmath>
#include <stdexcept>

namespace wiretap {
namespace {

ComplexVector draw_row(Rng& rng, int n) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

// Resolves an optional error vector: empty means zero error.
ComplexVector resolve_error(const ComplexVector& e, Eigen::Index n) {
  if (e.size() == 0) return ComplexVector::Zero(n);
  if (e.size() != n) {
    throw std::invalid_argument("mismatch vector has wrong dimension");
  }
  return e;
}

double log2_ratio(double num, double den) {
  return std::log2(num / den);
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::outage: return "outage";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::solver_failure: return "solver_failure";
  }
  return "unknown";
}

ChannelSet sample_channels(const SystemParams& params, std::uint64_t seed) {
  Rng rng(seed);
  ChannelSet ch;
  ch.h_b = draw_row(rng, params.n_a);
  ch.g_b = draw_row(rng, params.n_h);
  ch.h_e_est = draw_row(rng, params.n_a);
  ch.g_e_est = draw_row(rng, params.n_h);
  return ch;
}

double secrecy_rate_dt(const ChannelSet& ch, const HermitianMatrix& q_x,
                       const ComplexVector& e_h, double sigma_sq) {
  const ComplexVector h_e =
      ch.h_e_est + resolve_error(e_h, ch.h_e_est.cols());
  const double snr_b = quad_form(ch.h_b, q_x) / sigma_sq;
  const double snr_e = quad_form(h_e, q_x) / sigma_sq;
  return std::max(0.0, log2_ratio(1.0 + snr_b, 1.0 + snr_e));
}

double secrecy_rate_cj(const ChannelSet& ch, const HermitianMatrix& q_x,
                       const HermitianMatrix& q_z, const MismatchPair& mm,
                       double sigma_sq) {
  const double rate_b = std::log2(1.0 + bob_sinr(ch, q_x, q_z, sigma_sq));
  const double rate_e = std::log2(1.0 + eve_sinr(ch, q_x, q_z, mm, sigma_sq));
  return std::max(0.0, rate_b - rate_e);
}

double eve_sinr(const ChannelSet& ch, const HermitianMatrix& q_x,
                const HermitianMatrix& q_z, const MismatchPair& mm,
                double sigma_sq) {
  const ComplexVector h_e =
      ch.h_e_est + resolve_error(mm.e_h, ch.h_e_est.cols());
  const double signal = quad_form(h_e, q_x);
  double interference = 0.0;
  if (q_z.size() > 0) {
    const ComplexVector g_e =
        ch.g_e_est + resolve_error(mm.e_g, ch.g_e_est.cols());
    interference = quad_form(g_e, q_z);
  }
  return signal / (sigma_sq + interference);
}

double bob_sinr(const ChannelSet& ch, const HermitianMatrix& q_x,
                const HermitianMatrix& q_z, double sigma_sq) {
  const double signal = quad_form(ch.h_b, q_x);
  const double interference =
      q_z.size() > 0 ? quad_form(ch.g_b, q_z) : 0.0;
  return signal / (sigma_sq + interference);
}

MismatchProbe worst_mismatch_sampled(MismatchObjective objective,
                                     const ComplexVector& center,
                                     double radius,
                                     const HermitianMatrix& quad,
                                     int n_samples, std::uint64_t seed) {
  const Eigen::Index n = center.cols();
  const bool maximize = objective == MismatchObjective::maximize_eve;

  MismatchProbe best;
  best.e = ComplexVector::Zero(n);
  best.value = quad_form(center, quad);
  if (radius <= 0.0) return best;

  const auto consider = [&](const ComplexVector& e) {
    const double value = quad_form(center + e, quad);
    const bool better = maximize ? value > best.value : value < best.value;
    if (better) {
      best.value = value;
      best.e = e;
    }
  };

  // Value along e = t d is quadratic in t; both endpoints are candidates, and
  // for minimization so is the clamped stationary point.
  const auto probe_direction = [&](const ComplexVector& d) {
    consider(radius * d);
    consider(-radius * d);
    if (!maximize) {
      const double a = quad_form(d, quad);
      if (a > 0.0) {
        const double b = (d * quad * center.adjoint())(0, 0).real();
        double t = -b / a;
        t = std::max(-radius, std::min(radius, t));
        consider(t * d);
      }
    }
  };

  // Analytic candidates: the gradient direction at the center, and (for
  // minimization) the projection that removes the center's range component.
  const ComplexVector grad = center * quad;
  if (grad.norm() > 1e-14) {
    probe_direction(grad / grad.norm());
  }
  if (!maximize) {
    const ComplexVector interior = -center * quad * pseudo_inverse(quad);
    if (interior.norm() <= radius) consider(interior);
  }

  Rng rng(seed);
  for (int i = 0; i < n_samples; ++i) {
    ComplexVector d(n);
    for (Eigen::Index j = 0; j < n; ++j) d(j) = rng.complex_normal();
    const double norm = d.norm();
    if (norm < 1e-14) continue;
    probe_direction(d / norm);
  }
  return best;
}

}  // namespace wiretap
