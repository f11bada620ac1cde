#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "crc/linalg.hpp"
#include "crc/rng.hpp"

using namespace crc;

namespace {

MatC random_complex(Rng& rng, int rows, int cols) {
  MatC m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cplx(rng.gaussian(), rng.gaussian());
  return m;
}

MatC random_hpd(Rng& rng, int n) {
  const MatC g = random_complex(rng, n, n);
  return g * g.adjoint() + MatC::Identity(n, n);
}

}  // namespace

TEST_CASE("realify embeds complex matrix products faithfully") {
  Rng rng(101);
  const MatC a = random_complex(rng, 4, 3);
  const MatC b = random_complex(rng, 3, 5);

  const MatR ra = realify(a);
  CHECK(ra.rows() == 8);
  CHECK(ra.cols() == 6);
  // Block layout [Re -Im; Im Re].
  CHECK(ra.topLeftCorner(4, 3).isApprox(a.real(), 1e-14));
  CHECK(ra.topRightCorner(4, 3).isApprox(MatR(-a.imag()), 1e-14));
  CHECK(ra.bottomLeftCorner(4, 3).isApprox(a.imag(), 1e-14));
  CHECK(ra.bottomRightCorner(4, 3).isApprox(a.real(), 1e-14));

  // Ring homomorphism: realify(a b) = realify(a) realify(b).
  CHECK(rel_error(derealify(realify(a) * realify(b)), a * b) < 1e-13);

  // Hermitian input gives a symmetric embedding.
  const MatC h = hermitianize(random_complex(rng, 4, 4));
  const MatR rh = realify(h);
  CHECK((rh - rh.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("derealify inverts realify and averages the redundant copies") {
  Rng rng(102);
  const MatC a = random_complex(rng, 5, 2);
  CHECK(rel_error(derealify(realify(a)), a) < 1e-14);

  // Perturb the two copies asymmetrically; the average must come back.
  MatR x = realify(a);
  x(0, 0) += 0.2;                    // Re copy 1
  x(5, 2) -= 0.2;                    // Re copy 2 (shifted by block offsets)
  MatC back = derealify(x);
  CHECK(std::abs(back(0, 0) - a(0, 0)) < 1e-14);  // +0.1 then -0.1 cancels
}

TEST_CASE("hermitian_sqrt squares back to the clipped input") {
  Rng rng(103);
  const MatC h = random_hpd(rng, 6);
  const MatC r = hermitian_sqrt(h);
  CHECK(rel_error(r * r, h) < 1e-12);
  CHECK(rel_error(r, r.adjoint()) < 1e-12);

  // Indefinite input: negative eigenvalues clip to zero before the root.
  Eigen::SelfAdjointEigenSolver<MatC> es(h);
  VecR vals = es.eigenvalues();
  vals(0) = -3.0;
  const MatC indef =
      es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
  const MatC r2 = hermitian_sqrt(indef);
  vals(0) = 0.0;
  const MatC clipped =
      es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
  CHECK(rel_error(r2 * r2, clipped) < 1e-12);
}

TEST_CASE("logdet_pd matches the scalar and diagonal closed forms") {
  // 1x1: log det [x] = log x.
  MatC one(1, 1);
  one(0, 0) = 2.5;
  CHECK(logdet_pd(one) == doctest::Approx(std::log(2.5)).epsilon(1e-14));

  // Diagonal: sum of entry logs.
  MatC d = MatC::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 4.0;
  d(2, 2) = 0.25;
  CHECK(logdet_pd(d) ==
        doctest::Approx(std::log(1.0) + std::log(4.0) + std::log(0.25))
            .epsilon(1e-14));

  // General HPD: compare against the eigenvalue route.
  Rng rng(104);
  const MatC h = random_hpd(rng, 5);
  Eigen::SelfAdjointEigenSolver<MatC> es(h);
  CHECK(logdet_pd(h) ==
        doctest::Approx(es.eigenvalues().array().log().sum()).epsilon(1e-12));

  // Singular input must throw rather than return garbage.
  MatC sing = MatC::Zero(2, 2);
  sing(0, 0) = 1.0;
  CHECK_THROWS_AS(logdet_pd(sing), std::runtime_error);
}

TEST_CASE("logdet identity det(I + AB) = det(I + BA)") {
  Rng rng(105);
  const MatC a = random_complex(rng, 4, 2);
  const MatC b = a.adjoint();  // so both products are Hermitian PSD
  const MatC big = MatC::Identity(4, 4) + a * b;
  const MatC small = MatC::Identity(2, 2) + b * a;
  CHECK(logdet_pd(big) == doctest::Approx(logdet_pd(small)).epsilon(1e-12));
}

TEST_CASE("phase_align pins the dominant entry to the nonnegative real axis") {
  Rng rng(106);
  VecC v = random_complex(rng, 7, 1);
  const VecC w = phase_align(v);
  // Same vector up to a unit phase.
  CHECK(std::abs(w.norm() - v.norm()) < 1e-14);
  int imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  CHECK(w(imax).imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(w(imax).real() >= 0.0);
  // Aligning twice is idempotent.
  CHECK((phase_align(w) - w).norm() < 1e-13);
}

TEST_CASE("numerical_rank counts values above the relative threshold") {
  VecR spectrum(4);
  spectrum << 10.0, 1.0, 1e-5, 1e-12;
  CHECK(numerical_rank(spectrum, 1e-6) == 3);
  CHECK(numerical_rank(spectrum, 1e-4) == 2);
  CHECK(numerical_rank(spectrum, 0.5) == 1);
  CHECK(numerical_rank(VecR::Zero(3), 1e-6) == 0);
  CHECK(numerical_rank(VecR(0), 1e-6) == 0);
}

TEST_CASE("vec and unvec are column-major inverses") {
  Rng rng(107);
  const MatC m = random_complex(rng, 3, 4);
  const VecC v = vec(m);
  CHECK(v.size() == 12);
  // Column-major order: entry (i,j) lands at j*rows + i.
  CHECK(v(0) == m(0, 0));
  CHECK(v(1) == m(1, 0));
  CHECK(v(3) == m(0, 1));
  CHECK(v(11) == m(2, 3));
  CHECK(rel_error(unvec(v, 3, 4), m) < 1e-15);

  // vec(A X B) = (B^T kron A) vec(X), spot-checked via Eigen's kroneckerProduct
  // replacement: build the Kronecker product manually.
  const MatC a = random_complex(rng, 3, 3);
  const MatC b = random_complex(rng, 4, 4);
  const MatC x = random_complex(rng, 3, 4);
  MatC kron(12, 12);
  const MatC bt = b.transpose();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) kron.block(3 * i, 3 * j, 3, 3) = bt(i, j) * a;
  CHECK((kron * vec(x) - vec(a * x * b)).norm() < 1e-12);
}

TEST_CASE("rel_error uses the max(1, reference-norm) denominator") {
  MatC a = MatC::Zero(2, 2);
  MatC b = MatC::Zero(2, 2);
  a(0, 0) = 3e-3;
  // Small reference: denominator clamps to 1.
  CHECK(rel_error(a, b) == doctest::Approx(3e-3).epsilon(1e-12));
  b(0, 0) = 200.0;
  a(0, 0) = 100.0;
  CHECK(rel_error(a, b) == doctest::Approx(0.5).epsilon(1e-12));
}
