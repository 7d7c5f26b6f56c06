// Brute-force reference searches used only by tests: a covariance grid search
// at one or two antennas and a power-split grid.  These share no code with
// the solver modules they validate.

#include "wiretap/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wiretap::oracles {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Two-eigenvalue covariance from an explicit U(2) parameterization:
// Q = a u1 u1^H + b u2 u2^H with u1 = (cos t, sin t e^{i p}).
HermitianMatrix two_dim_covariance(double a, double b, double theta,
                                   double phi) {
  const std::complex<double> ph(std::cos(phi), std::sin(phi));
  Eigen::Vector2cd u1(std::cos(theta), std::sin(theta) * ph);
  Eigen::Vector2cd u2(-std::sin(theta) * std::conj(ph), std::cos(theta));
  return a * u1 * u1.adjoint() + b * u2 * u2.adjoint();
}

struct Point {
  double a = 0.0, b = 0.0, theta = 0.0, phi = 0.0;
  double value = -1e300;
};

double wrap_phi(double phi) {
  phi = std::fmod(phi, 2.0 * kPi);
  return phi < 0.0 ? phi + 2.0 * kPi : phi;
}

}  // namespace

GridResult grid_covariance_search(
    const std::function<double(const HermitianMatrix&)>& objective, int dim,
    double power, int resolution) {
  if (dim < 1 || dim > 2) {
    throw std::invalid_argument(
        "grid_covariance_search: only dimensions 1 and 2 are supported");
  }
  if (resolution < 2) {
    throw std::invalid_argument("grid_covariance_search: resolution too low");
  }

  GridResult best;
  if (dim == 1) {
    for (int i = 0; i < resolution; ++i) {
      const double q = power * i / (resolution - 1);
      HermitianMatrix m(1, 1);
      m(0, 0) = q;
      const double v = objective(m);
      if (v > best.value) {
        best.value = v;
        best.q = m;
      }
    }
    return best;
  }

  // Dimension 2, parameterized by the eigenvalue split (a, b) with
  // a + b <= power and the eigenvector angles (theta, phi).  Sharp objectives
  // (worst-case rates near a channel null) form narrow ridges in the angles,
  // so the search runs in three stages:
  //   A. dense sweep of the rank-one extreme points (a = power, b = 0),
  //   B. full four-axis grid at the requested resolution,
  //   C. compass (pattern) polish from the best separated seed points.
  // The returned value is the max over every point evaluated, so the result
  // is always an achieved value of the objective.
  std::vector<Point> seeds;
  const auto consider = [&](double a, double b, double theta, double phi) {
    const Point pt{a, b, theta, phi, objective(two_dim_covariance(
                                         a, b, theta, phi))};
    if (pt.value > best.value) {
      best.value = pt.value;
      best.q = two_dim_covariance(a, b, theta, phi);
    }
    // Keep the best representative per neighborhood as polish seeds.
    const auto near = [&](const Point& s) {
      const double dp = std::abs(s.phi - pt.phi);
      return std::abs(s.a - pt.a) < 0.15 * power &&
             std::abs(s.b - pt.b) < 0.15 * power &&
             std::abs(s.theta - pt.theta) < 0.12 &&
             std::min(dp, 2.0 * kPi - dp) < 0.25;
    };
    for (Point& s : seeds) {
      if (near(s)) {
        if (pt.value > s.value) s = pt;
        return;
      }
    }
    seeds.push_back(pt);
  };

  // Stage A: rank-one face, angles three and six times denser than the grid.
  const int nt = 3 * resolution;
  const int np = 6 * resolution;
  for (int it = 0; it < nt; ++it) {
    const double theta = 0.5 * kPi * it / (nt - 1);
    for (int ip = 0; ip < np; ++ip) {
      consider(power, 0.0, theta, 2.0 * kPi * ip / np);
    }
  }

  // Stage B: full grid; the b axis spans the remaining power.
  for (int ia = 0; ia < resolution; ++ia) {
    const double a = power * ia / (resolution - 1);
    for (int ib = 0; ib < resolution; ++ib) {
      const double b = (power - a) * ib / (resolution - 1);
      for (int it = 0; it < resolution; ++it) {
        const double theta = 0.5 * kPi * it / (resolution - 1);
        for (int ip = 0; ip < resolution; ++ip) {
          consider(a, b, theta, 2.0 * kPi * ip / resolution);
        }
      }
    }
  }

  // Stage C: polish the strongest seeds with a shrinking compass search.
  std::sort(seeds.begin(), seeds.end(),
            [](const Point& x, const Point& y) { return x.value > y.value; });
  if (seeds.size() > 12) seeds.resize(12);
  for (const Point& seed : seeds) {
    Point cur = seed;
    double step_pow = power / resolution;
    double step_ang = 0.12;
    for (int evals = 0; evals < 600 && (step_pow > 1e-4 * power ||
                                        step_ang > 1e-4);) {
      Point cand = cur;
      bool improved = false;
      const auto try_point = [&](double a, double b, double theta,
                                 double phi) {
        a = std::clamp(a, 0.0, power);
        b = std::clamp(b, 0.0, power - a);
        theta = std::clamp(theta, 0.0, 0.5 * kPi);
        phi = wrap_phi(phi);
        const double v =
            objective(two_dim_covariance(a, b, theta, phi));
        ++evals;
        if (v > cand.value) {
          cand = Point{a, b, theta, phi, v};
          improved = true;
        }
      };
      try_point(cur.a + step_pow, cur.b, cur.theta, cur.phi);
      try_point(cur.a - step_pow, cur.b, cur.theta, cur.phi);
      try_point(cur.a, cur.b + step_pow, cur.theta, cur.phi);
      try_point(cur.a, cur.b - step_pow, cur.theta, cur.phi);
      try_point(cur.a, cur.b, cur.theta + step_ang, cur.phi);
      try_point(cur.a, cur.b, cur.theta - step_ang, cur.phi);
      try_point(cur.a, cur.b, cur.theta, cur.phi + step_ang);
      try_point(cur.a, cur.b, cur.theta, cur.phi - step_ang);
      if (improved) {
        cur = cand;
      } else {
        step_pow *= 0.5;
        step_ang *= 0.5;
      }
    }
    if (cur.value > best.value) {
      best.value = cur.value;
      best.q = two_dim_covariance(cur.a, cur.b, cur.theta, cur.phi);
    }
  }
  return best;
}

PowerGridResult power_grid_search(
    const std::function<double(double, double)>& objective, double budget,
    int resolution) {
  if (resolution < 2) {
    throw std::invalid_argument("power_grid_search: resolution too low");
  }
  PowerGridResult best;
  for (int i = 0; i < resolution; ++i) {
    const double p1 = budget * i / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      const double p2 = (budget - p1) * j / (resolution - 1);
      const double v = objective(p1, p2);
      if (v > best.value) {
        best.value = v;
        best.p1 = p1;
        best.p2 = p2;
      }
    }
  }
  return best;
}

}  // namespace wiretap::oracles
