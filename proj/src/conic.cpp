#include "wiretap/conic.hpp"

#include "ipm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace wiretap::conic {

const char* to_string(SolutionStatus s) {
  switch (s) {
    case SolutionStatus::optimal: return "optimal";
    case SolutionStatus::infeasible: return "infeasible";
    case SolutionStatus::inaccurate: return "inaccurate";
    case SolutionStatus::error: return "error";
  }
  return "unknown";
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  constant += other.constant;
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  return *this;
}

LinExpr& LinExpr::scale(double s) {
  constant *= s;
  for (auto& [idx, coeff] : terms) coeff *= s;
  return *this;
}

int ConicProblem::add_scalar(const std::string& name, VarSign sign) {
  scalars_.push_back({name, sign, n_params_});
  n_params_ += 1;
  return static_cast<int>(scalars_.size()) - 1;
}

int ConicProblem::add_hermitian(const std::string& name, int dim) {
  assert(dim >= 1);
  matrices_.push_back({name, dim, n_params_});
  n_params_ += dim * dim;
  return static_cast<int>(matrices_.size()) - 1;
}

int ConicProblem::scalar_param(int scalar_handle) const {
  return scalars_.at(scalar_handle).param;
}

LinExpr ConicProblem::scalar_expr(int scalar_handle, double coeff) const {
  LinExpr e;
  e.add(scalars_.at(scalar_handle).param, coeff);
  return e;
}

LinExpr ConicProblem::trace(int mat_handle) const {
  const MatrixVar& mv = matrices_.at(mat_handle);
  LinExpr e;
  for (int i = 0; i < mv.dim; ++i) e.add(mv.param_offset + i, 1.0);
  return e;
}

LinExpr ConicProblem::trace_product(int mat_handle,
                                    const HermitianMatrix& c) const {
  const MatrixVar& mv = matrices_.at(mat_handle);
  assert(c.rows() == mv.dim && c.cols() == mv.dim);
  LinExpr e;
  int p = mv.param_offset;
  for (int i = 0; i < mv.dim; ++i) e.add(p++, c(i, i).real());
  for (int i = 0; i < mv.dim; ++i) {
    for (int j = i + 1; j < mv.dim; ++j) {
      e.add(p++, 2.0 * c(i, j).real());
      e.add(p++, 2.0 * c(i, j).imag());
    }
  }
  return e;
}

LinExpr ConicProblem::quad_form(int mat_handle, const ComplexVector& v) const {
  return trace_product(mat_handle, hermitize(v.adjoint() * v));
}

int ConicProblem::add_lmi_block(int dim) {
  Block b;
  b.dim = dim;
  b.f0 = HermitianMatrix::Zero(dim, dim);
  blocks_.push_back(std::move(b));
  return static_cast<int>(blocks_.size()) - 1;
}

void ConicProblem::lmi_add_const(int block, const HermitianMatrix& c) {
  Block& b = blocks_.at(block);
  assert(c.rows() == b.dim && c.cols() == b.dim);
  b.f0 += c;
}

void ConicProblem::lmi_add_scalar_term(int block, int scalar_handle,
                                       const HermitianMatrix& c) {
  Block& b = blocks_.at(block);
  assert(c.rows() == b.dim && c.cols() == b.dim);
  const int param = scalars_.at(scalar_handle).param;
  auto [it, inserted] =
      b.coeff.try_emplace(param, HermitianMatrix::Zero(b.dim, b.dim));
  it->second += c;
}

HermitianMatrix ConicProblem::basis_matrix(int dim, int local_param) {
  HermitianMatrix b = HermitianMatrix::Zero(dim, dim);
  if (local_param < dim) {
    b(local_param, local_param) = 1.0;
    return b;
  }
  int q = local_param - dim;
  const int pair = q / 2;
  const bool imag_part = (q % 2) == 1;
  int count = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      if (count == pair) {
        if (imag_part) {
          b(i, j) = std::complex<double>(0.0, 1.0);
          b(j, i) = std::complex<double>(0.0, -1.0);
        } else {
          b(i, j) = 1.0;
          b(j, i) = 1.0;
        }
        return b;
      }
      ++count;
    }
  }
  throw std::out_of_range("basis_matrix: local parameter out of range");
}

void ConicProblem::lmi_add_matrix_term(int block, int mat_handle, int row_off,
                                       int col_off,
                                       std::complex<double> coeff) {
  Block& b = blocks_.at(block);
  const MatrixVar& mv = matrices_.at(mat_handle);
  const int d = mv.dim;
  assert((row_off + 1) * d <= b.dim && (col_off + 1) * d <= b.dim);
  if (row_off == col_off) {
    assert(std::abs(coeff.imag()) < 1e-14 &&
           "diagonal placements need a real coefficient");
  }
  for (int p = 0; p < d * d; ++p) {
    const HermitianMatrix basis = basis_matrix(d, p);
    HermitianMatrix full = HermitianMatrix::Zero(b.dim, b.dim);
    if (row_off == col_off) {
      full.block(row_off * d, col_off * d, d, d) = coeff.real() * basis;
    } else {
      full.block(row_off * d, col_off * d, d, d) = coeff * basis;
      full.block(col_off * d, row_off * d, d, d) = std::conj(coeff) * basis;
    }
    auto [it, inserted] = b.coeff.try_emplace(
        mv.param_offset + p, HermitianMatrix::Zero(b.dim, b.dim));
    it->second += full;
  }
}

void ConicProblem::lmi_add_vector_term(int block, int mat_handle,
                                       const ComplexVector& v, int row_off,
                                       int col, std::complex<double> coeff) {
  Block& b = blocks_.at(block);
  const MatrixVar& mv = matrices_.at(mat_handle);
  const int d = mv.dim;
  assert(v.cols() == d);
  assert((row_off + 1) * d <= b.dim && col >= 0 && col < b.dim);
  assert((col < row_off * d || col >= (row_off + 1) * d) &&
         "border column must not overlap the row range");
  for (int p = 0; p < d * d; ++p) {
    const Eigen::VectorXcd column = coeff * (basis_matrix(d, p) * v.adjoint());
    HermitianMatrix full = HermitianMatrix::Zero(b.dim, b.dim);
    full.block(row_off * d, col, d, 1) = column;
    full.block(col, row_off * d, 1, d) = column.adjoint();
    auto [it, inserted] = b.coeff.try_emplace(
        mv.param_offset + p, HermitianMatrix::Zero(b.dim, b.dim));
    it->second += full;
  }
}

void ConicProblem::add_psd(int mat_handle) {
  const int block = add_lmi_block(matrices_.at(mat_handle).dim);
  lmi_add_matrix_term(block, mat_handle, 0, 0, 1.0);
}

void ConicProblem::add_eq(const LinExpr& expr, double rhs) {
  eqs_.push_back({expr, rhs});
}

void ConicProblem::add_ineq(const LinExpr& expr, double rhs) {
  ineqs_.push_back({expr, rhs});
}

void ConicProblem::set_objective(Sense sense, const LinExpr& expr) {
  sense_ = sense;
  objective_ = expr;
}

// ---- lowering to the real kernel ----

struct ProblemLowering {
  const ConicProblem& p;

  conic_detail::SdpData sdp;  // embedded blocks plus inequality rows
  Eigen::MatrixXd eq_a;       // equality rows kept separate
  Eigen::VectorXd eq_rhs;

  explicit ProblemLowering(const ConicProblem& prob) : p(prob) {
    const int n = p.n_params_;
    sdp.n = n;
    sdp.c = Eigen::VectorXd::Zero(n);
    if (p.sense_ != Sense::feasibility) {
      const double sign = p.sense_ == Sense::maximize ? -1.0 : 1.0;
      for (const auto& [idx, coeff] : p.objective_.terms)
        sdp.c(idx) += sign * coeff;
    }

    for (const auto& b : p.blocks_) {
      conic_detail::SdpBlock rb;
      rb.f0 = complex_to_real_embed(b.f0);
      for (const auto& [param, coeff] : b.coeff)
        rb.terms.emplace_back(param, complex_to_real_embed(coeff));
      sdp.blocks.push_back(std::move(rb));
    }

    int n_rows = static_cast<int>(p.ineqs_.size());
    for (const auto& sv : p.scalars_)
      if (sv.sign == VarSign::nonneg) ++n_rows;
    sdp.a = Eigen::MatrixXd::Zero(n_rows, n);
    sdp.rhs = Eigen::VectorXd::Zero(n_rows);
    int r = 0;
    for (const auto& row : p.ineqs_) {
      for (const auto& [idx, coeff] : row.expr.terms) sdp.a(r, idx) += coeff;
      sdp.rhs(r) = row.rhs - row.expr.constant;
      ++r;
    }
    for (const auto& sv : p.scalars_) {
      if (sv.sign == VarSign::nonneg) {
        sdp.a(r, sv.param) = -1.0;
        sdp.rhs(r) = 0.0;
        ++r;
      }
    }

    eq_a = Eigen::MatrixXd::Zero(static_cast<int>(p.eqs_.size()), n);
    eq_rhs = Eigen::VectorXd::Zero(static_cast<int>(p.eqs_.size()));
    for (std::size_t i = 0; i < p.eqs_.size(); ++i) {
      for (const auto& [idx, coeff] : p.eqs_[i].expr.terms)
        eq_a(static_cast<int>(i), idx) += coeff;
      eq_rhs(static_cast<int>(i)) = p.eqs_[i].rhs - p.eqs_[i].expr.constant;
    }
  }
};

namespace {

double eval_expr(const LinExpr& expr, const std::vector<double>& x) {
  double v = expr.constant;
  for (const auto& [idx, coeff] : expr.terms) v += coeff * x[idx];
  return v;
}

}  // namespace

ConicSolution ConicProblem::solve(const SolveOptions& opts) const {
  ProblemLowering low(*this);
  ConicSolution sol;

  conic_detail::SdpData reduced = low.sdp;
  const bool has_eqs = low.eq_a.rows() > 0;
  Eigen::VectorXd x_part;
  Eigen::MatrixXd kernel;
  std::vector<double> warm_reduced;

  if (has_eqs) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(low.eq_a);
    lu.setThreshold(1e-10);
    x_part = lu.solve(low.eq_rhs);
    const double consistency =
        (low.eq_a * x_part - low.eq_rhs).cwiseAbs().maxCoeff();
    if (consistency > 1e-8 * (1.0 + low.eq_rhs.cwiseAbs().maxCoeff())) {
      sol.status = SolutionStatus::infeasible;
      sol.message = "equality constraints are inconsistent";
      return sol;
    }
    kernel = lu.kernel();
    if (lu.dimensionOfKernel() == 0) kernel.resize(n_params_, 0);

    const int q = static_cast<int>(kernel.cols());
    reduced.n = q;
    reduced.c = kernel.transpose() * low.sdp.c;
    for (auto& blk : reduced.blocks) {
      Eigen::MatrixXd f0 = blk.f0;
      for (const auto& [k, coeff] : blk.terms) f0 += x_part(k) * coeff;
      std::vector<std::pair<int, Eigen::MatrixXd>> new_terms;
      for (int j = 0; j < q; ++j) {
        Eigen::MatrixXd fj =
            Eigen::MatrixXd::Zero(blk.f0.rows(), blk.f0.cols());
        bool nonzero = false;
        for (const auto& [k, coeff] : blk.terms) {
          if (kernel(k, j) != 0.0) {
            fj += kernel(k, j) * coeff;
            nonzero = true;
          }
        }
        if (nonzero && fj.cwiseAbs().maxCoeff() > 0.0)
          new_terms.emplace_back(j, std::move(fj));
      }
      blk.f0 = std::move(f0);
      blk.terms = std::move(new_terms);
    }
    reduced.rhs = low.sdp.rhs - low.sdp.a * x_part;
    reduced.a = low.sdp.a * kernel;

    if (opts.warm_start &&
        static_cast<int>(opts.warm_start->size()) == n_params_) {
      Eigen::VectorXd xw(n_params_);
      for (int i = 0; i < n_params_; ++i) xw(i) = (*opts.warm_start)[i];
      Eigen::VectorXd zw =
          kernel.colPivHouseholderQr().solve(xw - x_part);
      warm_reduced.assign(zw.data(), zw.data() + zw.size());
    }
  }

  conic_detail::KernelOptions kopts;
  kopts.gap_tol = opts.gap_tol;
  kopts.feasibility_only = sense_ == Sense::feasibility;
  kopts.analytic_center = opts.analytic_center;
  kopts.high_precision = opts.high_precision;
  kopts.max_newton = opts.max_newton;
  if (!warm_reduced.empty()) {
    kopts.warm_start = &warm_reduced;
  } else if (!has_eqs) {
    kopts.warm_start = opts.warm_start;
  }

  const conic_detail::KernelResult kr = conic_detail::solve_sdp(reduced, kopts);

  // Map the kernel point back to the full parameter vector.
  std::vector<double> x(n_params_, 0.0);
  if (has_eqs) {
    Eigen::VectorXd z(static_cast<int>(kr.x.size()));
    for (std::size_t i = 0; i < kr.x.size(); ++i)
      z(static_cast<int>(i)) = kr.x[i];
    Eigen::VectorXd xf = x_part + kernel * z;
    for (int i = 0; i < n_params_; ++i) x[i] = xf(i);
  } else {
    x = kr.x;
  }

  sol.raw_x = x;
  sol.newton_steps = kr.newton_steps;
  sol.message = kr.message;

  // Extract named values.
  for (const auto& sv : scalars_) sol.scalars[sv.name] = x[sv.param];
  for (const auto& mv : matrices_) {
    HermitianMatrix m(mv.dim, mv.dim);
    int pidx = mv.param_offset;
    for (int i = 0; i < mv.dim; ++i) m(i, i) = x[pidx++];
    for (int i = 0; i < mv.dim; ++i) {
      for (int j = i + 1; j < mv.dim; ++j) {
        const double re = x[pidx++];
        const double im = x[pidx++];
        m(i, j) = std::complex<double>(re, im);
        m(j, i) = std::complex<double>(re, -im);
      }
    }
    sol.matrices[mv.name] = std::move(m);
  }

  sol.objective_value =
      sense_ == Sense::feasibility ? 0.0 : eval_expr(objective_, x);

  // Residuals against the original complex-valued constraints.
  double resid = 0.0;
  for (const auto& b : blocks_) {
    HermitianMatrix f = b.f0;
    for (const auto& [param, coeff] : b.coeff) f += x[param] * coeff;
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(hermitize(f),
                                                      Eigen::EigenvaluesOnly);
    resid = std::max(resid, -es.eigenvalues().minCoeff());
  }
  for (const auto& row : ineqs_)
    resid = std::max(resid, eval_expr(row.expr, x) - row.rhs);
  for (const auto& sv : scalars_)
    if (sv.sign == VarSign::nonneg) resid = std::max(resid, -x[sv.param]);
  for (const auto& row : eqs_)
    resid = std::max(resid, std::abs(eval_expr(row.expr, x) - row.rhs));
  sol.max_residual = resid;

  switch (kr.status) {
    case conic_detail::KernelStatus::optimal:
    case conic_detail::KernelStatus::feasible_point:
      sol.status = resid <= 1e-6 ? SolutionStatus::optimal
                                 : SolutionStatus::inaccurate;
      break;
    case conic_detail::KernelStatus::infeasible:
      sol.status = SolutionStatus::infeasible;
      break;
    case conic_detail::KernelStatus::unbounded:
      sol.status = SolutionStatus::error;
      if (sol.message.empty())
        sol.message = "objective appears unbounded over the feasible set";
      break;
    case conic_detail::KernelStatus::trouble:
      sol.status = SolutionStatus::inaccurate;
      break;
  }
  return sol;
}

void ConicProblem::dump_sdpa(const std::string& path) const {
  ProblemLowering low(*this);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_sdpa: cannot open " + path);

  // Equalities are emitted as opposing inequality pairs in the diagonal
  // block, so the dump is self-contained.
  const int n_ineq = static_cast<int>(low.sdp.a.rows());
  const int n_eq = static_cast<int>(low.eq_a.rows());
  const int diag_size = n_ineq + 2 * n_eq;

  out << "* exported LMI problem (minimize c^T x, F0 + sum x_k Fk >= 0)\n";
  out << n_params_ << "\n";
  out << (blocks_.size() + (diag_size > 0 ? 1 : 0)) << "\n";
  for (const auto& b : blocks_) out << 2 * b.dim << " ";
  if (diag_size > 0) out << -diag_size;
  out << "\n";
  for (int i = 0; i < n_params_; ++i)
    out << low.sdp.c(i) << (i + 1 < n_params_ ? " " : "");
  out << "\n";

  const auto emit = [&out](int matno, int blkno, int i, int j, double v) {
    if (v != 0.0) {
      out << matno << " " << blkno << " " << i + 1 << " " << j + 1 << " " << v
          << "\n";
    }
  };

  for (std::size_t b = 0; b < low.sdp.blocks.size(); ++b) {
    const auto& blk = low.sdp.blocks[b];
    const int blkno = static_cast<int>(b) + 1;
    for (int i = 0; i < blk.f0.rows(); ++i)
      for (int j = i; j < blk.f0.cols(); ++j)
        emit(0, blkno, i, j, -blk.f0(i, j));
    for (const auto& [param, coeff] : blk.terms)
      for (int i = 0; i < coeff.rows(); ++i)
        for (int j = i; j < coeff.cols(); ++j)
          emit(param + 1, blkno, i, j, coeff(i, j));
  }

  if (diag_size > 0) {
    const int blkno = static_cast<int>(blocks_.size()) + 1;
    for (int r = 0; r < n_ineq; ++r) {
      emit(0, blkno, r, r, -low.sdp.rhs(r));
      for (int k = 0; k < n_params_; ++k)
        emit(k + 1, blkno, r, r, -low.sdp.a(r, k));
    }
    for (int e = 0; e < n_eq; ++e) {
      const int r1 = n_ineq + 2 * e;
      const int r2 = r1 + 1;
      emit(0, blkno, r1, r1, -low.eq_rhs(e));
      emit(0, blkno, r2, r2, low.eq_rhs(e));
      for (int k = 0; k < n_params_; ++k) {
        emit(k + 1, blkno, r1, r1, -low.eq_a(e, k));
        emit(k + 1, blkno, r2, r2, low.eq_a(e, k));
      }
    }
  }
}

BisectResult bisect(const std::function<bool(double)>& feasible,
                    const BisectionConfig& cfg) {
  BisectResult out;
  if (!(cfg.upper > cfg.lower)) {
    throw std::invalid_argument("bisect: upper bound must exceed lower bound");
  }
  if (!feasible(cfg.upper)) {
    out.status = BisectStatus::upper_bound_infeasible;
    out.t_star = cfg.upper;
    return out;
  }
  double lo = cfg.lower;
  double hi = cfg.upper;
  int iters = 0;
  while (hi - lo > cfg.tolerance && iters < cfg.max_iter) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++iters;
  }
  out.t_star = hi;
  out.iterations = iters;
  if (hi - lo > cfg.tolerance) {
    out.status = BisectStatus::max_iter;
  } else if (hi - cfg.lower <= cfg.tolerance) {
    out.status = BisectStatus::lower_bound_feasible;
  } else {
    out.status = BisectStatus::converged;
  }
  return out;
}

}  // namespace wiretap::conic
