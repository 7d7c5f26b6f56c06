#include "wiretap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wiretap {

bool is_hermitian(const HermitianMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

HermitianMatrix hermitize(const HermitianMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

bool psd_check(const HermitianMatrix& m, double tol) {
  if (!is_hermitian(m)) {
    throw std::invalid_argument("psd_check: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(m,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

HermitianMatrix clamp_psd(const HermitianMatrix& m, double tol) {
  if (!is_hermitian(m)) {
    throw std::invalid_argument("clamp_psd: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(m);
  Eigen::VectorXd vals = es.eigenvalues();
  if (vals.minCoeff() < -tol) {
    throw std::invalid_argument(
        "clamp_psd: eigenvalue below the clamping tolerance");
  }
  for (int i = 0; i < vals.size(); ++i) vals(i) = std::max(vals(i), 0.0);
  return hermitize(es.eigenvectors() * vals.asDiagonal() *
                   es.eigenvectors().adjoint());
}

HermitianMatrix pseudo_inverse(const HermitianMatrix& m, double rank_tol) {
  if (!is_hermitian(m)) {
    throw std::invalid_argument("pseudo_inverse: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(m);
  const Eigen::VectorXd& vals = es.eigenvalues();
  const double cutoff = rank_tol * vals.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
  for (int i = 0; i < vals.size(); ++i) {
    if (std::abs(vals(i)) > cutoff) inv(i) = 1.0 / vals(i);
  }
  return hermitize(es.eigenvectors() * inv.asDiagonal() *
                   es.eigenvectors().adjoint());
}

HermitianMatrix null_projector(const ComplexVector& v) {
  const double norm_sq = v.squaredNorm();
  if (norm_sq <= 0.0) {
    throw std::invalid_argument("null_projector: zero vector");
  }
  const Eigen::Index n = v.cols();
  return HermitianMatrix::Identity(n, n) - v.adjoint() * v / norm_sq;
}

GenEig max_generalized_eigvec(const PencilPair& pencil) {
  if (!is_hermitian(pencil.a) || !is_hermitian(pencil.b)) {
    throw std::invalid_argument("max_generalized_eigvec: pencil not Hermitian");
  }
  {
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> check(
        pencil.b, Eigen::EigenvaluesOnly);
    if (check.eigenvalues().minCoeff() <= kPencilMinEig) {
      throw std::invalid_argument(
          "max_generalized_eigvec: pencil denominator is not positive "
          "definite");
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<HermitianMatrix> ges(
      hermitize(pencil.a), hermitize(pencil.b));
  const Eigen::Index n = pencil.a.rows();
  // Eigenvalues come back ascending; take the dominant pair.
  Eigen::VectorXcd v = ges.eigenvectors().col(n - 1);
  v.normalize();

  GenEig out;
  out.value = ges.eigenvalues()(n - 1);
  // Return the row r = v^H so that Q = r^H r = v v^H.
  ComplexVector r = v.adjoint();
  // Phase convention: rotate so the first entry of nontrivial magnitude is
  // real and positive, making the representative unique.
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mag = std::abs(r(i));
    if (mag > 1e-12) {
      r *= std::conj(r(i)) / mag;
      break;
    }
  }
  out.vector = r;
  return out;
}

Eigen::MatrixXd complex_to_real_embed(const HermitianMatrix& m) {
  const HermitianMatrix h = hermitize(m);
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd out(2 * n, 2 * n);
  const Eigen::MatrixXd a = h.real();
  const Eigen::MatrixXd b = h.imag();
  out.topLeftCorner(n, n) = a;
  out.topRightCorner(n, n) = -b;
  out.bottomLeftCorner(n, n) = b;
  out.bottomRightCorner(n, n) = a;
  return out;
}

std::vector<double> eigenvalues_desc(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(hermitize(m),
                                                    Eigen::EigenvaluesOnly);
  std::vector<double> vals(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  std::reverse(vals.begin(), vals.end());
  return vals;
}

double quad_form(const ComplexVector& v, const HermitianMatrix& m) {
  return (v * m * v.adjoint())(0, 0).real();
}

}  // namespace wiretap
