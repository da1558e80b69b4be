#pragma once

#include <cstdint>
#include <random>

#include "shsqrt/symplectic.hpp"

namespace shsqrt {

// Portable uniform(0,1): mt19937_64 output mapped to [0,1) with the top 53
// bits. Documented in the README so generated matrices are reproducible.
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : gen_(seed) {}
  double next() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

// Fixed 10x10 test matrix: W = [[ee^T, A], [-A^T, ee^T]] with the displayed
// skew-symmetric 5x5 A, so G = F = A in the packed block form.
inline SkewHamiltonianMatrix example1() {
  const std::size_t n = 5;
  DenseMatrix ones(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ones(i, j) = 1.0;
  const double t = 1e-6;
  const double rows[5][5] = {
      {0, t, 1, 0, 0},
      {-t, 0, 1, t, 0},
      {-1, -1, 0, t, 1},
      {0, -t, -t, 0, 1},
      {0, 0, -1, -1, 0},
  };
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rows[i][j];
  // The off-diagonal blocks must be skew-symmetric for W to be
  // skew-Hamiltonian; the displayed matrix satisfies A = -A^T.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) != -a(j, i))
        throw Error(ExitCode::Internal,
                    "example1: transcription error, A is not skew-symmetric");
  SkewHamiltonianMatrix w;
  w.n = n;
  w.A = ones;
  w.G = a;
  w.F = a;
  return w;
}

// Fixed 8x8 test matrix with near-imaginary spectrum:
// W = [[A, B], [B, A^T]] with the displayed A and skew-symmetric B.
inline SkewHamiltonianMatrix example2() {
  const std::size_t n = 4;
  const double t = 1e-6;
  const double arows[4][4] = {
      {0, -t, 0, 0},
      {t, 0, 0, 0},
      {0, 0, 0, t},
      {0, 0, -t, 0},
  };
  const double brows[4][4] = {
      {0, 1, 2, 3},
      {-1, 0, 2, 3},
      {-2, -2, 0, 3},
      {-3, -3, -3, 0},
  };
  SkewHamiltonianMatrix w;
  w.n = n;
  w.A = DenseMatrix(n, n);
  w.G = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      w.A(i, j) = arows[i][j];
      w.G(i, j) = brows[i][j];
    }
  w.F = w.G;
  return w;
}

// Random skew-Hamiltonian W = [[A, B - B^T], [C - C^T, A^T]] with entries
// drawn uniformly from (0,1); half_order is n, the full matrix is 2n x 2n.
inline SkewHamiltonianMatrix random_skew_hamiltonian(std::size_t half_order,
                                                     std::uint64_t seed) {
  if (half_order == 0)
    throw ConfigError("random_skew_hamiltonian: order must be positive");
  const std::size_t n = half_order;
  UniformRng rng(seed);
  SkewHamiltonianMatrix w;
  w.n = n;
  w.A = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w.A(i, j) = rng.next();
  DenseMatrix b(n, n), c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = rng.next();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i, j) = rng.next();
  w.G = b - b.transposed();
  w.F = c - c.transposed();
  return w;
}

// Example 3 of the test set: order 2n = 50 by default.
inline SkewHamiltonianMatrix example3(std::size_t order = 50,
                                      std::uint64_t seed = 1) {
  if (order < 2 || order % 2 != 0)
    throw ConfigError("example3: order must be even and >= 2");
  return random_skew_hamiltonian(order / 2, seed);
}

}  // namespace shsqrt
