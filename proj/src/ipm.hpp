#pragma once
// Internal log-barrier interior-point kernel for inequality-form
// semidefinite programs over real symmetric blocks:
//
//   minimize    c^T x
//   subject to  F0_b + sum_k x_k Fk_b  PSD   for every block b,
//               A x <= rhs              componentwise.
//
// Phase I minimizes an auxiliary slack to locate a strictly interior point
// (or certify that none exists via the barrier duality gap); Phase II follows
// the central path to the target gap.  The Newton kernel can run in long
// double when callers need eigenvalue ratios tighter than double rounding
// supports.

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace wiretap::conic_detail {

struct SdpBlock {
  Eigen::MatrixXd f0;
  std::vector<std::pair<int, Eigen::MatrixXd>> terms;  // (param, coefficient)
};

struct SdpData {
  int n = 0;
  Eigen::VectorXd c;  // minimize c^T x
  std::vector<SdpBlock> blocks;
  Eigen::MatrixXd a;    // inequality rows (may be empty)
  Eigen::VectorXd rhs;
};

enum class KernelStatus {
  optimal,
  feasible_point,
  infeasible,
  unbounded,
  trouble,
};

struct KernelOptions {
  double gap_tol = 1e-9;
  bool feasibility_only = false;
  bool analytic_center = false;
  bool high_precision = false;
  int max_newton = 4000;
  const std::vector<double>* warm_start = nullptr;
};

struct KernelResult {
  KernelStatus status = KernelStatus::trouble;
  std::vector<double> x;
  double objective = 0.0;
  double margin = 0.0;  // min constraint slack at x (eigenvalue / row units)
  int newton_steps = 0;
  std::string message;
};

KernelResult solve_sdp(const SdpData& data, const KernelOptions& opts);

}  // namespace wiretap::conic_detail
