#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "shsqrt/generate.hpp"
#include "shsqrt/schur.hpp"

using namespace shsqrt;

namespace {

DenseMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  UniformRng rng(seed);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.next() - 0.5;
  return m;
}

// det(A - lambda*I) by complex Gaussian elimination with partial pivoting;
// independent oracle for eigenvalue checks at n <= 5.
std::complex<double> char_poly_at(const DenseMatrix& a, std::complex<double> lam) {
  const std::size_t n = a.rows();
  std::vector<std::vector<std::complex<double>>> m(n,
      std::vector<std::complex<double>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m[i][j] = a(i, j);
      if (i == j) m[i][j] -= lam;
    }
  std::complex<double> det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m[i][k]) > std::abs(m[piv][k])) piv = i;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      det = -det;
    }
    if (std::abs(m[k][k]) == 0.0) return 0.0;
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const std::complex<double> f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

double reconstruction_error(const RealSchurForm& f, const DenseMatrix& a) {
  const DenseMatrix rebuilt = mat_mul(mat_mul(f.Q, f.R), f.Q.transposed());
  return frobenius_norm(rebuilt - a) / std::max(1.0, frobenius_norm(a));
}

double orthogonality_defect(const DenseMatrix& q) {
  return frobenius_norm(mat_mul(q.transposed(), q) -
                        DenseMatrix::identity(q.rows()));
}

void check_quasi_triangular(const RealSchurForm& f) {
  // Exact zeros below the block diagonal; 2x2 blocks strictly nonreal.
  std::size_t covered = 0;
  for (const SchurBlock& b : f.blocks) {
    CHECK(b.start == covered);
    covered += b.size;
    if (b.size == 2) {
      const double r11 = f.R(b.start, b.start);
      const double r12 = f.R(b.start, b.start + 1);
      const double r21 = f.R(b.start + 1, b.start);
      const double r22 = f.R(b.start + 1, b.start + 1);
      CHECK((r11 - r22) * (r11 - r22) + 4.0 * r12 * r21 < 0.0);
    }
  }
  CHECK(covered == f.R.rows());
  for (const SchurBlock& b : f.blocks)
    for (std::size_t j = 0; j < b.start; ++j)
      for (std::size_t i = b.start; i < b.start + b.size; ++i)
        if (i > j) CHECK(f.R(i, j) == 0.0);
}

}  // namespace

TEST_CASE("hessenberg_reduce leaves Hessenberg input untouched") {
  DenseMatrix a(3, 3, {1, 2, 3, 4, 5, 6, 0, 7, 8});
  auto [q, h] = hessenberg_reduce(a);
  CHECK(max_abs_diff(h, a) == 0.0);
  CHECK(max_abs_diff(q, DenseMatrix::identity(3)) == 0.0);
}

TEST_CASE("hessenberg_reduce of a symmetric matrix is tridiagonal") {
  DenseMatrix a = random_matrix(6, 5);
  a = a + a.transposed();
  auto [q, h] = hessenberg_reduce(a);
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t i = j + 2; i < 6; ++i) {
      CHECK(h(i, j) == 0.0);
      CHECK(std::fabs(h(j, i)) <= 1e-13 * frobenius_norm(a));
    }
  CHECK(frobenius_norm(mat_mul(mat_mul(q.transposed(), a), q) - h) <=
        1e-14 * frobenius_norm(a));
}

TEST_CASE("hessenberg_reduce reconstruction on random input") {
  const DenseMatrix a = random_matrix(5, 17);
  auto [q, h] = hessenberg_reduce(a);
  CHECK(frobenius_norm(mat_mul(mat_mul(q.transposed(), a), q) - h) <=
        1e-14 * frobenius_norm(a));
  CHECK_THROWS_AS(hessenberg_reduce(DenseMatrix(2, 3)), ShapeError);
}

TEST_CASE("francis_qr on diagonal input is a no-op") {
  DenseMatrix h(3, 3);
  h(0, 0) = 3.0;
  h(1, 1) = -1.0;
  h(2, 2) = 7.0;
  FlopCounter ctx;
  RealSchurForm f = francis_qr(h, DenseMatrix::identity(3), ctx);
  CHECK(max_abs_diff(f.R, h) == 0.0);
  CHECK(max_abs_diff(f.Q, DenseMatrix::identity(3)) == 0.0);
  CHECK(f.blocks.size() == 3);
}

TEST_CASE("francis_qr keeps a rotation block as one 2x2 block") {
  DenseMatrix h(2, 2, {0, 1, -1, 0});
  FlopCounter ctx;
  RealSchurForm f = francis_qr(h, DenseMatrix::identity(2), ctx);
  REQUIRE(f.blocks.size() == 1);
  CHECK(f.blocks[0].size == 2);
  const Spectrum sp = spectrum_of(f);
  std::vector<std::complex<double>> ev = sp.eigenvalues;
  std::sort(ev.begin(), ev.end(),
            [](auto a, auto b) { return a.imag() < b.imag(); });
  CHECK(std::abs(ev[0] - std::complex<double>(0, -1)) <= 1e-14);
  CHECK(std::abs(ev[1] - std::complex<double>(0, 1)) <= 1e-14);
}

TEST_CASE("francis_qr splits real-eigenvalue 2x2 blocks") {
  DenseMatrix h(2, 2, {0, 1, 1, 0});
  FlopCounter ctx;
  RealSchurForm f = francis_qr(h, DenseMatrix::identity(2), ctx);
  REQUIRE(f.blocks.size() == 2);
  std::vector<double> ev{f.R(0, 0), f.R(1, 1)};
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("real_schur trivial cases") {
  RealSchurForm f = real_schur(DenseMatrix::identity(4));
  CHECK(max_abs_diff(f.R, DenseMatrix::identity(4)) == 0.0);

  DenseMatrix d(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 4.0;
  f = real_schur(d);
  std::vector<double> ev{f.R(0, 0), f.R(1, 1)};
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("real_schur invariants on random matrices") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const DenseMatrix a = random_matrix(8, seed);
    RealSchurForm f = real_schur(a);
    CHECK(reconstruction_error(f, a) <= 1e-13);
    CHECK(orthogonality_defect(f.Q) <= 1e-13 * 8);
    check_quasi_triangular(f);
  }
  // Desk-scale larger case.
  const DenseMatrix a = random_matrix(64, 99);
  RealSchurForm f = real_schur(a);
  CHECK(reconstruction_error(f, a) <= 1e-13);
  check_quasi_triangular(f);
}

TEST_CASE("spectrum matches the characteristic polynomial oracle (n <= 5)") {
  for (std::uint64_t seed : {4u, 5u, 6u, 7u}) {
    const DenseMatrix a = random_matrix(5, seed);
    const Spectrum sp = spectrum_of(real_schur(a));
    REQUIRE(sp.eigenvalues.size() == 5);
    // Scale: p(lambda) near a root behaves like prod of gaps; compare against
    // |p| at a reference point to normalize.
    const double ref = std::abs(char_poly_at(a, std::complex<double>(10.0, 0.0)));
    for (const auto& lam : sp.eigenvalues)
      CHECK(std::abs(char_poly_at(a, lam)) <= 1e-8 * std::max(1.0, ref));
  }
}

TEST_CASE("spectrum_of block formulas") {
  DenseMatrix r(2, 2, {0, 1, -1, 0});
  FlopCounter ctx;
  RealSchurForm f = francis_qr(r, DenseMatrix::identity(2), ctx);
  Spectrum sp = spectrum_of(f);
  CHECK(std::abs(std::abs(sp.eigenvalues[0].imag()) - 1.0) <= 1e-14);
  CHECK(std::fabs(sp.eigenvalues[0].real()) <= 1e-14);

  // [[a, b], [-b, a]] has eigenvalues a +- ib.
  RealSchurForm g;
  g.Q = DenseMatrix::identity(2);
  g.R = DenseMatrix(2, 2, {3.0, 2.0, -2.0, 3.0});
  g.blocks = {{0, 2}};
  sp = spectrum_of(g);
  std::vector<std::complex<double>> ev = sp.eigenvalues;
  std::sort(ev.begin(), ev.end(),
            [](auto a, auto b) { return a.imag() < b.imag(); });
  CHECK(std::abs(ev[0] - std::complex<double>(3, -2)) <= 1e-14);
  CHECK(std::abs(ev[1] - std::complex<double>(3, 2)) <= 1e-14);
}

TEST_CASE("example 1 block A spectrum: rank-one all-ones matrix") {
  // A is the 5x5 all-ones matrix: eigenvalues 5 and 0 (multiplicity 4).
  const SkewHamiltonianMatrix w = example1();
  RealSchurForm f = real_schur(w.A);
  for (const SchurBlock& b : f.blocks) CHECK(b.size == 1);
  std::vector<double> diag;
  for (const SchurBlock& b : f.blocks) diag.push_back(f.R(b.start, b.start));
  std::sort(diag.begin(), diag.end());
  for (int i = 0; i < 4; ++i) CHECK(std::fabs(diag[i]) <= 1e-13);
  CHECK(diag[4] == doctest::Approx(5.0).epsilon(1e-13));
}
