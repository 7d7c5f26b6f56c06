#pragma once
// System model for the multi-antenna wiretap link with a friendly jammer:
// parameter bundles, deterministic channel draws, bounded channel-error
// pairs, secrecy-rate and SINR evaluations, and a sampling-based
// worst-mismatch search used as an independent check on the closed-form
// worst cases.
//
// The source (n_a antennas) talks to a single-antenna receiver over h_b
// while a single-antenna eavesdropper listens over h_e; a helper (n_h
// antennas) can jam over g_b / g_e.  Only channel estimates h_e_est and
// g_e_est of the eavesdropper links are known, with errors confined to balls
// |e_h|^2 <= eps_h_sq and |e_g|^2 <= eps_g_sq.

#include "wiretap/linalg.hpp"
#include "wiretap/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wiretap {

struct SystemParams {
  int n_a = 4;            // source antennas
  int n_h = 4;            // helper antennas
  double sigma_sq = 1.0;  // receiver noise power (common to all receivers)
  double eps_h_sq = 0.0;  // squared radius of the source-to-eve error ball
  double eps_g_sq = 0.0;  // squared radius of the helper-to-eve error ball
  double p_s = 1.0;       // source power budget (linear)
  double p_j = 1.0;       // helper power budget (linear)
  double p_total = 2.0;   // shared budget for the global allocation schemes
  double gamma_t = 1.0;   // receiver SINR target (linear) for QoS designs
};

struct ChannelSet {
  ComplexVector h_b;      // source -> receiver
  ComplexVector g_b;      // helper -> receiver
  ComplexVector h_e_est;  // source -> eavesdropper, estimate
  ComplexVector g_e_est;  // helper -> eavesdropper, estimate
};

// A channel-error pair.  Empty vectors mean zero error of matching size.
struct MismatchPair {
  ComplexVector e_h;
  ComplexVector e_g;
};

enum class SolveStatus { optimal, outage, max_iter, solver_failure };
const char* to_string(SolveStatus s);

struct SchemeResult {
  HermitianMatrix q_x;  // source transmit covariance
  HermitianMatrix q_z;  // helper jamming covariance (zero when unused)
  MismatchPair worst_mismatch;
  double secrecy_rate_bits = 0.0;  // worst-case secrecy rate, clamped at 0
  double eve_metric = 0.0;         // eavesdropper SINR at worst mismatch
  double bob_metric = 0.0;         // receiver SINR
  int iterations = 0;
  SolveStatus status = SolveStatus::optimal;
  std::vector<double> q_x_spectrum;  // descending eigenvalues, for rank studies
  std::vector<double> rate_trace;    // outer-iteration trace (joint schemes)
};

// Draws all four channels i.i.d. CN(0, 1) per entry from a fresh
// deterministic stream.  Order: h_b, g_b, h_e_est, g_e_est.
ChannelSet sample_channels(const SystemParams& params, std::uint64_t seed);

// Direct transmission: rate log2(1 + |h_b|-side SNR) - log2(1 + Eve SNR) with
// the eavesdropper channel h_e_est + e_h, clamped at zero.
double secrecy_rate_dt(const ChannelSet& ch, const HermitianMatrix& q_x,
                       const ComplexVector& e_h, double sigma_sq);

// Cooperative jamming: both receivers see the jamming covariance q_z through
// their own helper channels (exact g_b for the receiver, estimate + error for
// the eavesdropper).  Clamped at zero.
double secrecy_rate_cj(const ChannelSet& ch, const HermitianMatrix& q_x,
                       const HermitianMatrix& q_z, const MismatchPair& mm,
                       double sigma_sq);

double eve_sinr(const ChannelSet& ch, const HermitianMatrix& q_x,
                const HermitianMatrix& q_z, const MismatchPair& mm,
                double sigma_sq);

double bob_sinr(const ChannelSet& ch, const HermitianMatrix& q_x,
                const HermitianMatrix& q_z, double sigma_sq);

// Sampling-based search over the error ball, used to cross-check closed-form
// worst cases.  maximize_eve seeks the error that maximizes
// (center + e) quad (center + e)^H; minimize_jamming seeks the minimizer.
enum class MismatchObjective { maximize_eve, minimize_jamming };

struct MismatchProbe {
  ComplexVector e;
  double value = 0.0;
};

MismatchProbe worst_mismatch_sampled(MismatchObjective objective,
                                     const ComplexVector& center,
                                     double radius,
                                     const HermitianMatrix& quad,
                                     int n_samples, std::uint64_t seed);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace wiretap
