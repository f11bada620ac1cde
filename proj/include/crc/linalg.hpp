#pragma once

// Small dense linear-algebra helpers shared across the library: the real
// embedding of complex Hermitian problems, Hermitian square roots, stable
// log-determinants, and phase/rank utilities.

#include <Eigen/Dense>

#include <complex>

namespace crc {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using RowVecC = Eigen::RowVectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

inline constexpr cplx kJ{0.0, 1.0};  // imaginary unit

/// Real embedding [Re(A) -Im(A); Im(A) Re(A)]; symmetric when A is Hermitian.
MatR realify(const MatC& a);

/// Inverse of realify, averaging the two redundant copies of each entry.
MatC derealify(const MatR& x);

/// (A + A^H)/2.
MatC hermitianize(const MatC& a);

/// Hermitian PSD square root via eigendecomposition; eigenvalues below zero
/// are clipped to zero before the root is formed.
MatC hermitian_sqrt(const MatC& a);

/// log(det(A)) for Hermitian positive definite A, via Cholesky.
/// Throws std::runtime_error if the factorization fails.
double logdet_pd(const MatC& a);

/// Rotates v by a unit phase so its largest-magnitude entry is real >= 0.
VecC phase_align(const VecC& v);

/// Number of values in descending nonnegative `spectrum` above
/// rel_tol * spectrum(0). Zero if the spectrum is empty or non-positive.
int numerical_rank(const VecR& spectrum, double rel_tol);

/// Frobenius-normalized distance ||a - b||_F / max(1, ||b||_F).
double rel_error(const MatC& a, const MatC& b);

/// Column-major stacking of a matrix into a vector.
VecC vec(const MatC& m);

/// Inverse of vec for the given shape.
MatC unvec(const VecC& v, int rows, int cols);

}  // namespace crc
