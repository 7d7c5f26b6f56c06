#pragma once
// Deterministic, platform-independent random number generation.
//
// The experiment harness must produce byte-identical output across machines
// and standard libraries, so std::normal_distribution (whose algorithm is
// implementation-defined) is off the table.  The pipeline is fixed and named:
// splitmix64 expands a user seed into xoshiro256++ state, uniform doubles take
// the top 53 bits, and normal draws come from Box-Muller with a cached spare.

#include <complex>
#include <cstdint>

namespace wiretap {

class Rng {
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();

  // Standard normal N(0, 1).
  double normal();

  // Circularly symmetric complex Gaussian CN(0, 1): real and imaginary parts
  // are independent N(0, 1/2).
  std::complex<double> complex_normal();

private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wiretap
