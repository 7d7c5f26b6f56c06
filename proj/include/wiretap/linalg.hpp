#pragma once
// Complex Hermitian linear algebra primitives shared by every solver module:
// PSD checks and clamping, Moore-Penrose pseudo-inverse, null-space
// projectors, matrix-pencil generalized eigenvectors, and the real symmetric
// embedding that lets a real-cone backend handle complex LMI blocks.
//
// Conventions: channel vectors are 1 x N rows (h), beamformers are unit rows
// (w) with covariance Q = P * w^H w, and Hermitian matrices are MatrixXcd
// values kept conjugate-symmetric to 1e-10 max entrywise at every interface.

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace wiretap {

using ComplexVector = Eigen::RowVectorXcd;
using HermitianMatrix = Eigen::MatrixXcd;

// Matrix pencil (a, b) for the generalized eigenproblem a v = lambda b v;
// b must be Hermitian positive definite.
struct PencilPair {
  HermitianMatrix a;
  HermitianMatrix b;
};

struct GenEig {
  double value = 0.0;
  // Unit-norm row r with Q = r^H r rank one; first nonzero entry is made
  // real and positive so repeated solves return an identical representative.
  ComplexVector vector;
};

inline constexpr double kHermTol = 1e-10;
inline constexpr double kPsdTol = 1e-8;
inline constexpr double kRankTolDefault = 1e-9;
inline constexpr double kPencilMinEig = 1e-10;

// Max entrywise |m - m^H| test.
bool is_hermitian(const HermitianMatrix& m, double tol = kHermTol);

// (m + m^H) / 2.
HermitianMatrix hermitize(const HermitianMatrix& m);

// True when every eigenvalue is >= -tol.  Throws std::invalid_argument if m
// is not Hermitian; near-miss inputs must be repaired explicitly by the
// caller, not silently accepted here.
bool psd_check(const HermitianMatrix& m, double tol = kPsdTol);

// Projects onto the PSD cone by zeroing eigenvalues in [-tol, 0).  Throws
// std::invalid_argument if any eigenvalue is below -tol.
HermitianMatrix clamp_psd(const HermitianMatrix& m, double tol = kPsdTol);

// Moore-Penrose pseudo-inverse of a Hermitian matrix via eigendecomposition.
// Eigenvalues with |lambda| <= rank_tol * max|lambda| are treated as zero.
HermitianMatrix pseudo_inverse(const HermitianMatrix& m,
                               double rank_tol = kRankTolDefault);

// Orthogonal projector onto the complement of span(v^H): I - v^H v / |v|^2.
// Throws std::invalid_argument on a zero vector.
HermitianMatrix null_projector(const ComplexVector& v);

// Dominant generalized eigenpair of the pencil (a, b).  Throws
// std::invalid_argument unless both matrices are Hermitian and b has minimum
// eigenvalue > kPencilMinEig.
GenEig max_generalized_eigvec(const PencilPair& pencil);

// Real symmetric embedding [[A, -B], [B, A]] of m = A + iB.  The embedding
// doubles every eigenvalue's multiplicity and preserves semidefiniteness.
// Input is expected Hermitian; it is symmetrized before embedding.
Eigen::MatrixXd complex_to_real_embed(const HermitianMatrix& m);

// Eigenvalues sorted in descending order.
std::vector<double> eigenvalues_desc(const HermitianMatrix& m);

// Real part of v m v^H for a row vector v.
double quad_form(const ComplexVector& v, const HermitianMatrix& m);

}  // namespace wiretap
