#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "shsqrt/generate.hpp"
#include "shsqrt/sqrtm.hpp"

using namespace shsqrt;

namespace {

constexpr double kEps = 2.220446049250313e-16;

DenseMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  UniformRng rng(seed);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.next() - 0.5;
  return m;
}

// Diagonally dominant shift puts the spectrum in the right half-plane.
DenseMatrix right_half_plane_matrix(std::size_t n, std::uint64_t seed) {
  DenseMatrix m = random_matrix(n, seed);
  for (std::size_t i = 0; i < n; ++i) m(i, i) += 4.0;
  return m;
}

double rel_residual(const DenseMatrix& x, const DenseMatrix& a) {
  return frobenius_norm(mat_mul(x, x) - a) / frobenius_norm(a);
}

}  // namespace

TEST_CASE("sqrt_block_1x1") {
  CHECK(sqrt_block_1x1(4.0, +1) == 2.0);
  CHECK(sqrt_block_1x1(1.0, -1) == -1.0);
  CHECK_THROWS_AS(sqrt_block_1x1(-1.0, +1), NegativeRealEigenvalueError);
  CHECK_THROWS_AS(sqrt_block_1x1(0.0, +1), SingularMatrixError);
}

TEST_CASE("sqrt_block_2x2 hand examples") {
  const DenseMatrix r1(2, 2, {0, 1, -1, 0});
  const DenseMatrix z1 = sqrt_block_2x2(r1, +1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(z1(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-14));
  CHECK(z1(0, 1) == doctest::Approx(inv_sqrt2).epsilon(1e-14));
  CHECK(z1(1, 0) == doctest::Approx(-inv_sqrt2).epsilon(1e-14));
  CHECK(z1(1, 1) == doctest::Approx(inv_sqrt2).epsilon(1e-14));
  CHECK(rel_residual(z1, r1) <= 1e-14);

  // theta = 0, mu = 2, alpha = 1.
  const DenseMatrix r2(2, 2, {0, 4, -1, 0});
  const DenseMatrix z2 = sqrt_block_2x2(r2, +1);
  CHECK(z2(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(z2(0, 1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(z2(1, 0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(z2(1, 1) == doctest::Approx(1.0).epsilon(1e-14));

  // Sign symmetry.
  const DenseMatrix z1m = sqrt_block_2x2(r1, -1);
  CHECK(max_abs_diff(z1m, z1 * -1.0) == 0.0);

  // Real-eigenvalue 2x2 input violates the conjugate-pair precondition.
  CHECK_THROWS_AS(sqrt_block_2x2(DenseMatrix(2, 2, {1, 0, 0, 2}), +1),
                  StructureError);
}

TEST_CASE("sqrt_quasi_triangular hand examples") {
  FlopCounter ctx;
  DenseMatrix r(2, 2);
  r(0, 0) = 1.0;
  r(1, 1) = 4.0;
  std::vector<SchurBlock> blocks{{0, 1}, {1, 1}};
  BranchChoice branch{{0, 1}, {+1, +1}};

  QuasiTriangularRoot root = sqrt_quasi_triangular(r, blocks, branch, ctx);
  CHECK(root.Z(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(root.Z(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(root.Z(1, 0) == 0.0);

  r(0, 1) = 1.0;
  root = sqrt_quasi_triangular(r, blocks, branch, ctx);
  CHECK(root.Z(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(rel_residual(root.Z, r) <= 1e-15);
}

TEST_CASE("sqrt_quasi_triangular conjugate-pair block residual") {
  // Rotation-scaled 2x2 with conjugate eigenvalues.
  FlopCounter ctx;
  DenseMatrix r(2, 2, {0.3, 1.7, -1.7, 0.3});
  std::vector<SchurBlock> blocks{{0, 2}};
  BranchChoice branch{{0}, {+1}};
  QuasiTriangularRoot root = sqrt_quasi_triangular(r, blocks, branch, ctx);
  CHECK(rel_residual(root.Z, r) <= 1e-14);
}

TEST_CASE("sqrtm_real basics and residuals") {
  CHECK(max_abs_diff(sqrtm_real(DenseMatrix::identity(5)),
                     DenseMatrix::identity(5)) == 0.0);

  DenseMatrix d(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const DenseMatrix x = sqrtm_real(d);
  CHECK(x(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x(1, 1) == doctest::Approx(3.0).epsilon(1e-14));

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const DenseMatrix a = right_half_plane_matrix(8, seed);
    CHECK(rel_residual(sqrtm_real(a), a) <= 1e-13);
  }
}

TEST_CASE("sqrtm_real stability bound and principal branch") {
  for (std::uint64_t seed : {5u, 6u}) {
    const DenseMatrix a = right_half_plane_matrix(32, seed);
    const DenseMatrix x = sqrtm_real(a);
    const double alpha = frobenius_norm(x) * frobenius_norm(x) / frobenius_norm(a);
    CHECK(rel_residual(x, a) <= (1.0 + 32.0 * alpha) * kEps * 50.0);
    // Principal branch: all eigenvalues in the open right half-plane.
    const Spectrum sp = spectrum_of(real_schur(x));
    for (const auto& e : sp.eigenvalues) CHECK(e.real() > 0.0);
  }
}

TEST_CASE("sqrtm_real error paths") {
  DenseMatrix neg(2, 2);
  neg(0, 0) = -1.0;
  neg(1, 1) = 2.0;
  CHECK_THROWS_AS(sqrtm_real(neg), NegativeRealEigenvalueError);

  DenseMatrix sing(2, 2);
  sing(1, 1) = 3.0;
  CHECK_THROWS_AS(sqrtm_real(sing), SingularMatrixError);

  CHECK_THROWS_AS(sqrtm_real(DenseMatrix(2, 3)), ShapeError);
}

TEST_CASE("enumerate_real_root_functions counting examples") {
  DenseMatrix d(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 4.0;
  std::vector<DenseMatrix> roots = enumerate_real_root_functions(d);
  CHECK(roots.size() == 4);  // r = 2, c = 0

  DenseMatrix one(1, 1, {1.0});
  CHECK(enumerate_real_root_functions(one).size() == 2);

  const DenseMatrix rot(2, 2, {0.0, 1.0, -1.0, 0.0});
  CHECK(enumerate_real_root_functions(rot).size() == 2);  // r = 0, c = 1
}

TEST_CASE("enumerated roots are distinct, square back, and commute") {
  DenseMatrix a(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 4.0;
  a(2, 2) = 9.0;
  a(0, 1) = 0.5;
  a(1, 2) = -0.25;
  const std::vector<DenseMatrix> roots = enumerate_real_root_functions(a);
  CHECK(roots.size() == 8);  // r = 3, c = 0
  for (std::size_t i = 0; i < roots.size(); ++i) {
    CHECK(rel_residual(roots[i], a) <= 1e-12);
    CHECK(roots[i].all_finite());
    const double comm = frobenius_norm(mat_mul(roots[i], a) - mat_mul(a, roots[i]));
    CHECK(comm <= 1e-12 * frobenius_norm(a) * frobenius_norm(roots[i]));
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      CHECK(max_abs_diff(roots[i], roots[j]) > 1e-8);
  }
}

TEST_CASE("enumerate_real_root_functions error paths") {
  DenseMatrix neg(2, 2);
  neg(0, 0) = 1.0;
  neg(1, 1) = -4.0;
  CHECK_THROWS_AS(enumerate_real_root_functions(neg), NegativeRealEigenvalueError);

  DenseMatrix sing(2, 2);
  sing(0, 0) = 1.0;
  CHECK_THROWS_AS(enumerate_real_root_functions(sing), SingularMatrixError);

  DenseMatrix many(12, 12);
  for (std::size_t i = 0; i < 12; ++i) many(i, i) = static_cast<double>(i + 1);
  CHECK_THROWS_AS(enumerate_real_root_functions(many), TooManyBranchesError);
}

TEST_CASE("repeated eigenvalues share one branch group") {
  // diag(4, 4): one group, so exactly 2 roots, both with equal diagonals.
  DenseMatrix d(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 4.0;
  const std::vector<DenseMatrix> roots = enumerate_real_root_functions(d);
  CHECK(roots.size() == 2);
  for (const DenseMatrix& r : roots)
    CHECK(r(0, 0) == doctest::Approx(r(1, 1)).epsilon(1e-12));
}
