#include "ipm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace wiretap::conic_detail {
namespace {

// Thresholds in scaled constraint units.
constexpr double kStrictEps = 1e-9;   // minimum slack that counts as interior
constexpr double kAcceptEps = 1e-7;   // Phase I early-accept margin
constexpr double kBarrierMult = 30.0; // path-following growth factor

template <typename Scalar>
struct Program {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Block {
    Mat f0;
    std::vector<std::pair<int, Mat>> terms;
  };

  int n = 0;
  std::vector<Block> blocks;
  Mat a;    // rows x n (zero rows allowed)
  Vec rhs;

  int constraint_count() const {
    int m = static_cast<int>(a.rows());
    for (const auto& b : blocks) m += static_cast<int>(b.f0.rows());
    return m;
  }

  Mat eval_block(const Block& b, const Vec& x) const {
    Mat s = b.f0;
    for (const auto& [k, coeff] : b.terms) s += x(k) * coeff;
    return s;
  }

  // Minimum slack over all constraints; +inf convention when unconstrained.
  Scalar margin(const Vec& x) const {
    Scalar m = Scalar(1e30);
    for (const auto& b : blocks) {
      Eigen::SelfAdjointEigenSolver<Mat> es(eval_block(b, x),
                                            Eigen::EigenvaluesOnly);
      m = std::min(m, es.eigenvalues().minCoeff());
    }
    if (a.rows() > 0) {
      Vec slack = rhs - a * x;
      m = std::min(m, slack.minCoeff());
    }
    return m;
  }

  // Strict feasibility test cheap enough for line searches: Cholesky on each
  // block plus positive row slacks.
  bool interior(const Vec& x) const {
    if (a.rows() > 0 && (rhs - a * x).minCoeff() <= Scalar(0)) return false;
    for (const auto& b : blocks) {
      Eigen::LLT<Mat> llt(eval_block(b, x));
      if (llt.info() != Eigen::Success) return false;
    }
    return true;
  }

  // Barrier value at a point assumed interior.
  Scalar barrier(const Vec& x) const {
    Scalar phi = Scalar(0);
    for (const auto& b : blocks) {
      Eigen::LLT<Mat> llt(eval_block(b, x));
      if (llt.info() != Eigen::Success)
        return std::numeric_limits<Scalar>::infinity();
      const Mat& l = llt.matrixLLT();
      for (Eigen::Index i = 0; i < l.rows(); ++i)
        phi -= Scalar(2) * std::log(l(i, i));
    }
    if (a.rows() > 0) {
      Vec slack = rhs - a * x;
      if (slack.minCoeff() <= Scalar(0))
        return std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index i = 0; i < slack.size(); ++i)
        phi -= std::log(slack(i));
    }
    return phi;
  }

  // Gradient and Hessian of the barrier at an interior point.
  bool barrier_derivs(const Vec& x, Vec& grad, Mat& hess) const {
    grad.setZero(n);
    hess.setZero(n, n);
    std::vector<Mat> w;
    for (const auto& b : blocks) {
      Eigen::LLT<Mat> llt(eval_block(b, x));
      if (llt.info() != Eigen::Success) return false;
      const auto& lower = llt.matrixL();
      const int nt = static_cast<int>(b.terms.size());
      w.clear();
      w.reserve(nt);
      for (const auto& [k, coeff] : b.terms) {
        Mat tmp = lower.solve(coeff);
        Mat wk = lower.solve(tmp.transpose());
        wk = Scalar(0.5) * (wk + wk.transpose()).eval();
        grad(k) -= wk.trace();
        w.push_back(std::move(wk));
      }
      for (int p = 0; p < nt; ++p) {
        const int kp = b.terms[p].first;
        for (int q = p; q < nt; ++q) {
          const int kq = b.terms[q].first;
          const Scalar hpq = w[p].cwiseProduct(w[q]).sum();
          hess(kp, kq) += hpq;
          if (kp != kq) hess(kq, kp) += hpq;
        }
      }
    }
    if (a.rows() > 0) {
      Vec slack = rhs - a * x;
      for (Eigen::Index i = 0; i < slack.size(); ++i) {
        if (slack(i) <= Scalar(0)) return false;
        const Scalar inv = Scalar(1) / slack(i);
        grad += inv * a.row(i).transpose();
        hess += (inv * inv) * (a.row(i).transpose() * a.row(i));
      }
    }
    return true;
  }
};

enum class CenterOutcome { converged, hit_cap, diverged, stalled, early_exit };

// Damped Newton centering of  obj^T x + barrier(x)  from an interior start.
template <typename Scalar>
CenterOutcome center(const Program<Scalar>& prog,
                     const typename Program<Scalar>::Vec& obj,
                     typename Program<Scalar>::Vec& x, int inner_cap,
                     int& steps_used, int max_total_steps,
                     const std::function<bool(const typename Program<Scalar>::Vec&)>&
                         early_exit = nullptr) {
  using Mat = typename Program<Scalar>::Mat;
  using Vec = typename Program<Scalar>::Vec;

  for (int it = 0; it < inner_cap; ++it) {
    if (steps_used >= max_total_steps) return CenterOutcome::hit_cap;
    Vec grad;
    Mat hess;
    if (!prog.barrier_derivs(x, grad, hess)) return CenterOutcome::stalled;
    grad += obj;

    Vec dir;
    Scalar reg = Scalar(0);
    for (int attempt = 0;; ++attempt) {
      Mat h = hess;
      if (reg > Scalar(0)) h += reg * Mat::Identity(prog.n, prog.n);
      Eigen::LDLT<Mat> ldlt(h);
      if (ldlt.info() == Eigen::Success) {
        dir = ldlt.solve(-grad);
        if (dir.allFinite() && grad.dot(dir) < Scalar(0)) break;
      }
      if (attempt >= 12) return CenterOutcome::stalled;
      const Scalar base =
          Scalar(1e-12) * (Scalar(1) + hess.trace() / Scalar(prog.n));
      reg = reg == Scalar(0) ? base : reg * Scalar(100);
    }

    const Scalar decrement_sq = -grad.dot(dir);
    if (decrement_sq / Scalar(2) <= Scalar(1e-10))
      return CenterOutcome::converged;

    const Scalar psi0 = obj.dot(x) + prog.barrier(x);
    Scalar alpha = Scalar(1);
    bool accepted = false;
    while (alpha > Scalar(1e-14)) {
      Vec x_try = x + alpha * dir;
      if (prog.interior(x_try)) {
        const Scalar psi_try = obj.dot(x_try) + prog.barrier(x_try);
        if (psi_try <= psi0 + Scalar(0.25) * alpha * grad.dot(dir)) {
          x = x_try;
          accepted = true;
          break;
        }
      }
      alpha *= Scalar(0.5);
    }
    if (!accepted) return CenterOutcome::stalled;
    ++steps_used;

    if (early_exit && early_exit(x)) return CenterOutcome::early_exit;
    if (x.template lpNorm<Eigen::Infinity>() > Scalar(1e10) ||
        obj.dot(x) < Scalar(-1e15)) {
      return CenterOutcome::diverged;
    }
  }
  return CenterOutcome::hit_cap;
}

template <typename Scalar>
KernelResult run_kernel(const SdpData& data, const KernelOptions& opts) {
  using Mat = typename Program<Scalar>::Mat;
  using Vec = typename Program<Scalar>::Vec;

  KernelResult out;

  // Cast and normalize: each block and each row is scaled to O(1) magnitude
  // so interior-point thresholds mean the same thing across problems.
  Program<Scalar> prog;
  prog.n = data.n;
  prog.blocks.reserve(data.blocks.size());
  for (const auto& b : data.blocks) {
    typename Program<Scalar>::Block blk;
    double scale = b.f0.size() > 0 ? b.f0.cwiseAbs().maxCoeff() : 0.0;
    for (const auto& [k, coeff] : b.terms)
      scale = std::max(scale, coeff.cwiseAbs().maxCoeff());
    scale = std::max(1.0, scale);
    blk.f0 = (b.f0 / scale).template cast<Scalar>();
    for (const auto& [k, coeff] : b.terms)
      blk.terms.emplace_back(k, (coeff / scale).template cast<Scalar>());
    prog.blocks.push_back(std::move(blk));
  }
  const int n_rows = static_cast<int>(data.a.rows());
  prog.a.resize(n_rows, data.n);
  prog.rhs.resize(n_rows);
  for (int i = 0; i < n_rows; ++i) {
    double scale = std::max(data.a.row(i).cwiseAbs().maxCoeff(),
                            std::abs(data.rhs(i)));
    scale = std::max(1.0, scale);
    prog.a.row(i) = (data.a.row(i) / scale).template cast<Scalar>();
    prog.rhs(i) = Scalar(data.rhs(i) / scale);
  }

  const Vec c = data.c.template cast<Scalar>();
  const int m_total = prog.constraint_count();
  int steps = 0;

  Vec x = Vec::Zero(prog.n);
  if (opts.warm_start && static_cast<int>(opts.warm_start->size()) == prog.n) {
    for (int i = 0; i < prog.n; ++i) x(i) = Scalar((*opts.warm_start)[i]);
  }

  const auto finish = [&](KernelStatus st, const Vec& pt, std::string msg) {
    out.status = st;
    out.x.resize(prog.n);
    for (int i = 0; i < prog.n; ++i) out.x[i] = static_cast<double>(pt(i));
    out.objective = static_cast<double>(c.dot(pt));
    out.margin = static_cast<double>(prog.margin(pt));
    out.newton_steps = steps;
    out.message = std::move(msg);
    return out;
  };

  Scalar marg = prog.margin(x);

  // ---- Phase I: find a strictly interior point ----
  if (marg < Scalar(kAcceptEps)) {
    Program<Scalar> ph1;
    ph1.n = prog.n + 1;
    const int s_idx = prog.n;
    for (const auto& b : prog.blocks) {
      typename Program<Scalar>::Block blk;
      blk.f0 = b.f0;
      blk.terms = b.terms;
      blk.terms.emplace_back(
          s_idx, Mat::Identity(b.f0.rows(), b.f0.cols()));
      ph1.blocks.push_back(std::move(blk));
    }
    const Scalar s0 = std::max(Scalar(1e-2), -marg * Scalar(1.5) + Scalar(1e-2));
    ph1.a.resize(n_rows + 1, ph1.n);
    ph1.rhs.resize(n_rows + 1);
    if (n_rows > 0) {
      ph1.a.topLeftCorner(n_rows, prog.n) = prog.a;
      ph1.a.topRightCorner(n_rows, 1) = -Vec::Ones(n_rows);
      ph1.rhs.head(n_rows) = prog.rhs;
    }
    // Cap s from above so the Phase I feasible set is bounded in s.
    ph1.a.row(n_rows).setZero();
    ph1.a(n_rows, s_idx) = Scalar(1);
    ph1.rhs(n_rows) = s0 + Scalar(1);

    Vec y(ph1.n);
    y.head(prog.n) = x;
    y(s_idx) = s0;

    Vec obj1 = Vec::Zero(ph1.n);
    obj1(s_idx) = Scalar(1);
    const int m1 = ph1.constraint_count();

    const auto accept = [&](const Vec& yy) {
      return yy(s_idx) <= Scalar(-kAcceptEps);
    };

    bool feasible_found = false;
    Scalar t = Scalar(1);
    while (true) {
      const CenterOutcome rc = center<Scalar>(ph1, t * obj1, y, 80, steps,
                                              opts.max_newton, accept);
      if (rc == CenterOutcome::early_exit) {
        feasible_found = true;
        break;
      }
      if (rc == CenterOutcome::diverged || rc == CenterOutcome::stalled) {
        if (y(s_idx) <= Scalar(-kStrictEps)) {
          feasible_found = true;
          break;
        }
        return finish(KernelStatus::trouble, y.head(prog.n),
                      "phase I stalled before locating an interior point");
      }
      const Scalar gap = Scalar(m1) / t;
      // The centering gap bound, and hence the infeasibility certificate,
      // is only valid at a converged center.
      if (rc == CenterOutcome::converged &&
          y(s_idx) - gap > Scalar(-kStrictEps)) {
        return finish(KernelStatus::infeasible, y.head(prog.n),
                      "no strictly interior point exists");
      }
      if (gap <= Scalar(1e-11)) {
        feasible_found = y(s_idx) <= Scalar(-kStrictEps);
        if (!feasible_found) {
          return finish(KernelStatus::infeasible, y.head(prog.n),
                        "interior margin below the strict threshold");
        }
        break;
      }
      if (steps >= opts.max_newton) {
        return finish(KernelStatus::trouble, y.head(prog.n),
                      "phase I exhausted the Newton budget");
      }
      t *= Scalar(kBarrierMult);
    }
    if (!feasible_found) {
      return finish(KernelStatus::infeasible, y.head(prog.n),
                    "no strictly interior point exists");
    }
    x = y.head(prog.n);
  }

  // ---- feasibility-only exit ----
  if (opts.feasibility_only) {
    if (opts.analytic_center) {
      Vec zero_obj = Vec::Zero(prog.n);
      center<Scalar>(prog, zero_obj, x, 80, steps, opts.max_newton);
    }
    return finish(KernelStatus::feasible_point, x, "");
  }

  // ---- Phase II: follow the central path on the true objective ----
  Scalar t = Scalar(1);
  while (true) {
    const CenterOutcome rc =
        center<Scalar>(prog, (t * c).eval(), x, 80, steps, opts.max_newton);
    if (rc == CenterOutcome::diverged) {
      return finish(KernelStatus::unbounded, x,
                    "objective appears unbounded over the feasible set");
    }
    if (rc == CenterOutcome::stalled && t <= Scalar(1)) {
      return finish(KernelStatus::trouble, x, "newton stall on first stage");
    }
    const Scalar gap = Scalar(m_total) / t;
    const Scalar scale = Scalar(1) + std::abs(c.dot(x));
    if (gap <= Scalar(opts.gap_tol) * scale) {
      return finish(KernelStatus::optimal, x, "");
    }
    if (rc == CenterOutcome::stalled) {
      // Progress is blocked by conditioning; report the best point honestly.
      return finish(gap <= Scalar(1e-6) * scale ? KernelStatus::optimal
                                                : KernelStatus::trouble,
                    x, "stopped early at duality gap above target");
    }
    if (steps >= opts.max_newton) {
      return finish(gap <= Scalar(1e-6) * scale ? KernelStatus::optimal
                                                : KernelStatus::trouble,
                    x, "newton budget exhausted");
    }
    t *= Scalar(kBarrierMult);
  }
}

}  // namespace

KernelResult solve_sdp(const SdpData& data, const KernelOptions& opts) {
  if (opts.high_precision) return run_kernel<long double>(data, opts);
  return run_kernel<double>(data, opts);
}

}  // namespace wiretap::conic_detail
