#pragma once

// Seeded random draws used for scenario sampling and randomized checks.
// All distributions run on a single mt19937_64 stream so a scalar seed
// reproduces an entire draw sequence.

#include "crc/linalg.hpp"

#include <cstdint>
#include <random>

namespace crc {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform real on [lo, hi).
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  /// Uniform integer on [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }

  /// Standard normal draw.
  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }

  /// Circularly-symmetric complex normal with unit variance (0.5 per part).
  cplx cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

  /// Vector of independent cgaussian() draws.
  VecC cvector(int n) {
    VecC v(n);
    for (int i = 0; i < n; ++i) v(i) = cgaussian();
    return v;
  }

  /// Matrix of independent cgaussian() draws.
  MatC cmatrix(int rows, int cols) {
    MatC m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = cgaussian();
    return m;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace crc
