#include "crc/linalg.hpp"

#include <stdexcept>

namespace crc {

MatR realify(const MatC& a) {
  const auto n = a.rows();
  const auto m = a.cols();
  MatR x(2 * n, 2 * m);
  x.topLeftCorner(n, m) = a.real();
  x.topRightCorner(n, m) = -a.imag();
  x.bottomLeftCorner(n, m) = a.imag();
  x.bottomRightCorner(n, m) = a.real();
  return x;
}

MatC derealify(const MatR& x) {
  const auto n = x.rows() / 2;
  const auto m = x.cols() / 2;
  MatC a(n, m);
  a.real() = 0.5 * (x.topLeftCorner(n, m) + x.bottomRightCorner(n, m));
  a.imag() = 0.5 * (x.bottomLeftCorner(n, m) - x.topRightCorner(n, m));
  return a;
}

MatC hermitianize(const MatC& a) { return 0.5 * (a + a.adjoint()); }

MatC hermitian_sqrt(const MatC& a) {
  Eigen::SelfAdjointEigenSolver<MatC> eig(hermitianize(a));
  if (eig.info() != Eigen::Success) throw std::runtime_error("hermitian_sqrt: eigensolve failed");
  VecR lam = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lam.cwiseSqrt().asDiagonal() * eig.eigenvectors().adjoint();
}

double logdet_pd(const MatC& a) {
  Eigen::LLT<MatC> llt(a);
  if (llt.info() != Eigen::Success) throw std::runtime_error("logdet_pd: matrix not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
}

VecC phase_align(const VecC& v) {
  if (v.size() == 0) return v;
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const cplx pivot = v(imax);
  if (std::abs(pivot) == 0.0) return v;
  return v * (std::conj(pivot) / std::abs(pivot));
}

int numerical_rank(const VecR& spectrum, double rel_tol) {
  if (spectrum.size() == 0) return 0;
  const double top = spectrum(0);
  if (top <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i)
    if (spectrum(i) > rel_tol * top) ++r;
  return r;
}

double rel_error(const MatC& a, const MatC& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

VecC vec(const MatC& m) { return Eigen::Map<const VecC>(m.data(), m.size()); }

MatC unvec(const VecC& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols)
    throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const MatC>(v.data(), rows, cols);
}

}  // namespace crc
