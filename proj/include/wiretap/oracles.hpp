#pragma once
// Brute-force reference searches used by tests and the verification command.
// These share no machinery with the solvers they validate: covariances are
// enumerated from an explicit low-dimensional parameterization and every
// objective value comes from a caller-supplied callback.

#include "wiretap/linalg.hpp"

#include <functional>

namespace wiretap::oracles {

struct GridResult {
  HermitianMatrix q;
  double value = -1e300;
};

// Exhaustive maximization over Hermitian PSD matrices with trace at most
// power, for dimension 1 or 2 (throws std::invalid_argument above 2).
// Dimension 1 is a power grid.  Dimension 2 parameterizes Q by an eigenvalue
// split and a unitary angle pair, then takes the max over (A) a dense sweep
// of the rank-one full-power face, (B) a full four-axis grid at the given
// per-axis resolution, and (C) compass-search polish runs started from the
// best separated points of A and B.  Every reported value is attained at the
// returned q.
GridResult grid_covariance_search(
    const std::function<double(const HermitianMatrix&)>& objective, int dim,
    double power, int resolution);

struct PowerGridResult {
  double p1 = 0.0;
  double p2 = 0.0;
  double value = -1e300;
};

// Exhaustive maximization of objective(p1, p2) over the triangle
// p1, p2 >= 0, p1 + p2 <= budget on a resolution-by-resolution grid.
PowerGridResult power_grid_search(
    const std::function<double(double, double)>& objective, double budget,
    int resolution);

}  // namespace wiretap::oracles
