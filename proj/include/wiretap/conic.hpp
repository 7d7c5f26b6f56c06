#pragma once
// Uniform modeling layer for the linear-matrix-inequality problems every
// design in this project reduces to, plus the bisection driver used by the
// quasiconvex (linear-fractional) designs.
//
// A problem consists of named scalar variables (free or nonnegative), named
// complex Hermitian matrix variables, affine LMI blocks over those variables,
// affine scalar equalities and inequalities, and an affine objective.  Each
// Hermitian matrix of dimension n contributes n^2 real parameters (diagonal
// entries, then re/im pairs of the upper triangle).  Complex LMI blocks are
// embedded as real symmetric blocks [[A, -B], [B, A]] before the real-cone
// backend sees them; the backend is a two-phase log-barrier Newton method.
//
// Feasibility queries are strict: "feasible" means a point exists with every
// LMI eigenvalue and every linear slack at least ~1e-9, so bisection oracles
// behave monotonically.

#include "wiretap/linalg.hpp"

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace wiretap::conic {

enum class VarSign { free, nonneg };
enum class Sense { minimize, maximize, feasibility };
enum class SolutionStatus { optimal, infeasible, inaccurate, error };

const char* to_string(SolutionStatus s);

// Affine real expression over the problem's real parameter vector.
struct LinExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;  // (parameter index, coefficient)

  LinExpr& add(int param, double coeff) {
    terms.emplace_back(param, coeff);
    return *this;
  }
  LinExpr& operator+=(const LinExpr& other);
  LinExpr& scale(double s);
};

struct ConicSolution {
  SolutionStatus status = SolutionStatus::error;
  std::map<std::string, double> scalars;
  std::map<std::string, HermitianMatrix> matrices;
  double objective_value = 0.0;
  // Worst violation over all constraints at the returned point; at most ~1e-7
  // on LMIs and ~1e-7 on linear rows whenever status is optimal.
  double max_residual = 0.0;
  int newton_steps = 0;
  std::string message;
  std::vector<double> raw_x;  // parameter vector, reusable as a warm start
};

struct SolveOptions {
  double gap_tol = 1e-9;
  bool high_precision = false;  // run the Newton kernel in long double
  int max_newton = 4000;
  // For feasibility problems: follow the located interior point with a pure
  // centering pass, which yields a well-conditioned point for extraction.
  bool analytic_center = false;
  const std::vector<double>* warm_start = nullptr;
};

class ConicProblem {
 public:
  // --- variables ---
  int add_scalar(const std::string& name, VarSign sign);
  int add_hermitian(const std::string& name, int dim);

  // --- expression helpers ---
  // Parameter index of a scalar variable (for LinExpr::add).
  int scalar_param(int scalar_handle) const;
  // tr(X)
  LinExpr trace(int mat_handle) const;
  // tr(X C) for constant Hermitian C (real by symmetry)
  LinExpr trace_product(int mat_handle, const HermitianMatrix& c) const;
  // v X v^H for a constant row vector v
  LinExpr quad_form(int mat_handle, const ComplexVector& v) const;
  LinExpr scalar_expr(int scalar_handle, double coeff = 1.0) const;

  // --- LMI assembly ---
  // Starts an empty block of complex dimension dim; returns its index.
  int add_lmi_block(int dim);
  // Adds a constant Hermitian matrix to the block.
  void lmi_add_const(int block, const HermitianMatrix& c);
  // Adds x_s * C for a scalar variable.
  void lmi_add_scalar_term(int block, int scalar_handle,
                           const HermitianMatrix& c);
  // Places coeff * X at sub-block position (row_off, col_off) in units of the
  // matrix variable's dimension, mirroring the conjugate term automatically
  // when off-diagonal.  Diagonal placements require a real coeff.
  void lmi_add_matrix_term(int block, int mat_handle, int row_off, int col_off,
                           std::complex<double> coeff);
  // Border column for Schur-complement blocks: places coeff * (X v^H) into
  // rows [row_off*d, row_off*d+d) of column col, mirroring the adjoint into
  // row col.  col must lie outside the occupied row range.
  void lmi_add_vector_term(int block, int mat_handle, const ComplexVector& v,
                           int row_off, int col, std::complex<double> coeff);
  // Convenience: X itself PSD as a one-term block.
  void add_psd(int mat_handle);

  // --- scalar constraints ---
  void add_eq(const LinExpr& expr, double rhs);
  void add_ineq(const LinExpr& expr, double rhs);  // expr <= rhs

  // --- objective ---
  void set_objective(Sense sense, const LinExpr& expr = LinExpr{});

  int num_params() const { return n_params_; }

  ConicSolution solve(const SolveOptions& opts = SolveOptions{}) const;

  // Writes the real embedded problem in SDPA sparse format for external
  // inspection.  Equalities are written as paired inequalities.
  void dump_sdpa(const std::string& path) const;

 private:
  friend struct ProblemLowering;

  struct ScalarVar {
    std::string name;
    VarSign sign;
    int param;
  };
  struct MatrixVar {
    std::string name;
    int dim;
    int param_offset;  // dim^2 consecutive parameters
  };
  struct Block {
    int dim = 0;  // complex dimension
    HermitianMatrix f0;
    std::map<int, HermitianMatrix> coeff;  // param -> complex coefficient
  };
  struct Row {
    LinExpr expr;
    double rhs;
  };

  // Hermitian basis matrix for local parameter p of a dim-dimensional
  // matrix variable.
  static HermitianMatrix basis_matrix(int dim, int local_param);

  std::vector<ScalarVar> scalars_;
  std::vector<MatrixVar> matrices_;
  std::vector<Block> blocks_;
  std::vector<Row> eqs_;
  std::vector<Row> ineqs_;
  Sense sense_ = Sense::feasibility;
  LinExpr objective_;
  int n_params_ = 0;
};

// --- bisection ---

struct BisectionConfig {
  double lower = 0.0;
  double upper = 1.0;
  double tolerance = 1e-4;
  int max_iter = 60;
};

enum class BisectStatus {
  converged,
  lower_bound_feasible,   // oracle was feasible arbitrarily close to lower
  upper_bound_infeasible, // oracle rejected the upper bound outright
  max_iter,
};

struct BisectResult {
  double t_star = 0.0;
  int iterations = 0;
  BisectStatus status = BisectStatus::converged;
};

// Shrinks [lower, upper] by exact halving on a monotone feasibility oracle:
// feasible(t) true must imply feasible(t') true for t' > t.  Returns the
// feasible upper end.  The upper bound is probed first; the lower bound is
// never probed (it is assumed infeasible) but a result within tolerance of it
// is flagged so callers can detect an always-feasible oracle.
BisectResult bisect(const std::function<bool(double)>& feasible,
                    const BisectionConfig& cfg);

}  // namespace wiretap::conic
