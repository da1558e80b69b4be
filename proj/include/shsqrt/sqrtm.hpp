#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "shsqrt/matrix.hpp"
#include "shsqrt/schur.hpp"
#include "shsqrt/smallsolve.hpp"

namespace shsqrt {

// One sign per eigenvalue group; blocks whose eigenvalues coincide share a
// group so the computed root stays a function of the source matrix.
struct BranchChoice {
  std::vector<int> block_group;  // group index per diagonal block
  std::vector<int> group_sign;   // +1 or -1 per group

  int sign_of_block(std::size_t b) const { return group_sign[block_group[b]]; }

  static BranchChoice principal(const std::vector<int>& block_group,
                                std::size_t num_groups) {
    return {block_group, std::vector<int>(num_groups, +1)};
  }
};

struct QuasiTriangularRoot {
  DenseMatrix Z;
  BranchChoice branch;
};

namespace detail {

// Groups diagonal blocks by eigenvalue: two blocks share a group when their
// eigenvalues agree within 1e-8 * max(1, |lambda|).
inline std::vector<int> group_blocks(const DenseMatrix& r,
                                     const std::vector<SchurBlock>& blocks,
                                     std::size_t* num_groups_out) {
  std::vector<std::complex<double>> reps;  // one eigenvalue per group (Im >= 0)
  std::vector<int> assignment(blocks.size(), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::complex<double> lam;
    if (blocks[b].size == 1) {
      lam = {r(blocks[b].start, blocks[b].start), 0.0};
    } else {
      const std::size_t i = blocks[b].start;
      const double theta = 0.5 * (r(i, i) + r(i + 1, i + 1));
      const double half = 0.5 * (r(i, i) - r(i + 1, i + 1));
      const double inside = -half * half - r(i, i + 1) * r(i + 1, i);
      lam = {theta, std::sqrt(std::max(inside, 0.0))};
    }
    int g = -1;
    for (std::size_t k = 0; k < reps.size(); ++k) {
      if (std::abs(lam - reps[k]) <= 1e-8 * std::max(1.0, std::abs(lam))) {
        g = static_cast<int>(k);
        break;
      }
    }
    if (g < 0) {
      g = static_cast<int>(reps.size());
      reps.push_back(lam);
    }
    assignment[b] = g;
  }
  *num_groups_out = reps.size();
  return assignment;
}

}  // namespace detail

// Real square root of a positive scalar block.
inline double sqrt_block_1x1(double r, int sign, double singular_tol = 0.0) {
  if (std::fabs(r) <= singular_tol)
    throw SingularMatrixError("sqrt_block_1x1: zero eigenvalue");
  if (r < 0.0)
    throw NegativeRealEigenvalueError(
        "sqrt_block_1x1: negative real eigenvalue has no real root that is a "
        "function of the matrix");
  return sign * std::sqrt(r);
}

// Real square root of a 2x2 block with conjugate eigenvalues theta +- i*mu:
// Z = +-(alpha*I + (R - theta*I) / (2*alpha)) with (alpha + i*beta)^2 =
// theta + i*mu.
inline DenseMatrix sqrt_block_2x2(const DenseMatrix& rblk, int sign,
                                  double singular_tol = 0.0) {
  if (rblk.rows() != 2 || rblk.cols() != 2)
    throw ShapeError("sqrt_block_2x2: block must be 2x2");
  const double theta = 0.5 * (rblk(0, 0) + rblk(1, 1));
  const double half = 0.5 * (rblk(0, 0) - rblk(1, 1));
  const double inside = -half * half - rblk(0, 1) * rblk(1, 0);
  if (inside <= 0.0)
    throw StructureError("sqrt_block_2x2: block has real eigenvalues");
  const double mu = std::sqrt(inside);
  const double modulus = std::hypot(theta, mu);
  if (modulus <= singular_tol)
    throw SingularMatrixError("sqrt_block_2x2: zero eigenvalue");
  const double alpha = std::sqrt(0.5 * (theta + modulus));
  DenseMatrix z(2, 2);
  const double inv2a = 1.0 / (2.0 * alpha);
  z(0, 0) = alpha + (rblk(0, 0) - theta) * inv2a;
  z(0, 1) = rblk(0, 1) * inv2a;
  z(1, 0) = rblk(1, 0) * inv2a;
  z(1, 1) = alpha + (rblk(1, 1) - theta) * inv2a;
  if (sign < 0) z *= -1.0;
  return z;
}

// Block recursion for Z^2 = R over one superdiagonal at a time; the small
// Sylvester systems are vectorized and solved by Gaussian elimination with
// complete pivoting.
inline QuasiTriangularRoot sqrt_quasi_triangular(
    const DenseMatrix& r, const std::vector<SchurBlock>& blocks,
    const BranchChoice& branch, FlopCounter& ctx) {
  const std::size_t n = r.rows();
  const std::size_t m = blocks.size();
  const double singular_tol =
      std::numeric_limits<double>::epsilon() * frobenius_norm(r);
  DenseMatrix z(n, n);

  for (std::size_t b = 0; b < m; ++b) {
    const SchurBlock& blk = blocks[b];
    const int sign = branch.sign_of_block(b);
    if (blk.size == 1) {
      z(blk.start, blk.start) =
          sqrt_block_1x1(r(blk.start, blk.start), sign, singular_tol);
      ctx.sqrts += 1;
    } else {
      z.set_block(blk.start, blk.start,
                  sqrt_block_2x2(r.block(blk.start, blk.start, 2, 2), sign,
                                 singular_tol));
      ctx.sqrts += 2;
      ctx.muls += 6;
      ctx.adds += 4;
      ctx.divs += 1;
    }
  }

  for (std::size_t d = 1; d < m; ++d) {
    for (std::size_t bi = 0; bi + d < m; ++bi) {
      const std::size_t bj = bi + d;
      const std::size_t i0 = blocks[bi].start, p = blocks[bi].size;
      const std::size_t j0 = blocks[bj].start, q = blocks[bj].size;
      DenseMatrix rhs = r.block(i0, j0, p, q);
      for (std::size_t bk = bi + 1; bk < bj; ++bk) {
        const std::size_t k0 = blocks[bk].start, s = blocks[bk].size;
        rhs -= mat_mul(z.block(i0, k0, p, s), z.block(k0, j0, s, q), ctx);
      }
      // (I_q (x) Z_ii + Z_jj^T (x) I_p) vec(Z_ij) = vec(rhs), column-major.
      const std::size_t dim = p * q;
      DenseMatrix sys(dim, dim);
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t k = 0; k < p; ++k)
            sys(a * p + i, a * p + k) += z(i0 + i, i0 + k);
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t c = 0; c < q; ++c)
          for (std::size_t i = 0; i < p; ++i)
            sys(a * p + i, c * p + i) += z(j0 + c, j0 + a);
      std::vector<double> vec(dim);
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t i = 0; i < p; ++i) vec[a * p + i] = rhs(i, a);
      std::vector<double> sol = solve_complete_pivoting(sys, vec, ctx);
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t i = 0; i < p; ++i) z(i0 + i, j0 + a) = sol[a * p + i];
    }
  }
  return {std::move(z), branch};
}

// Product Z * M with Z quasi-upper-triangular; skips the structural zeros
// and counts only the work actually done.
inline DenseMatrix quasi_tri_mat_mul(const DenseMatrix& z, const DenseMatrix& m,
                                     FlopCounter& ctx) {
  if (z.cols() != m.rows()) throw ShapeError("quasi_tri_mat_mul: shape mismatch");
  const std::size_t n = z.rows(), cols = m.cols();
  DenseMatrix out(n, cols);
  std::uint64_t terms = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k0 = (i == 0) ? 0 : i - 1;
    for (std::size_t k = k0; k < n; ++k) {
      const double zik = z(i, k);
      if (zik == 0.0 && k == k0) continue;  // no subdiagonal entry here
      for (std::size_t j = 0; j < cols; ++j) out(i, j) += zik * m(k, j);
      ++terms;
    }
  }
  ctx.muls += terms * cols;
  ctx.adds += terms * cols;
  return out;
}

// Same for M * Z (Z quasi-upper-triangular).
inline DenseMatrix mat_mul_quasi_tri(const DenseMatrix& m, const DenseMatrix& z,
                                     FlopCounter& ctx) {
  if (m.cols() != z.rows())
    throw ShapeError("mat_mul_quasi_tri: shape mismatch");
  const std::size_t rows = m.rows(), n = z.cols();
  DenseMatrix out(rows, n);
  std::uint64_t terms = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k <= std::min(j + 1, n - 1); ++k) {
      const double zkj = z(k, j);
      if (zkj == 0.0 && k == j + 1) continue;
      for (std::size_t i = 0; i < rows; ++i) out(i, j) += m(i, k) * zkj;
      ++terms;
    }
  }
  ctx.muls += terms * rows;
  ctx.adds += terms * rows;
  return out;
}

// Same for M * Z^T (Z quasi-upper-triangular, so Z^T is quasi-lower).
inline DenseMatrix mat_mul_quasi_tri_transposed(const DenseMatrix& m,
                                                const DenseMatrix& z,
                                                FlopCounter& ctx) {
  if (m.cols() != z.cols())
    throw ShapeError("mat_mul_quasi_tri_transposed: shape mismatch");
  const std::size_t rows = m.rows(), n = z.rows();
  DenseMatrix out(rows, n);
  std::uint64_t terms = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k0 = (j == 0) ? 0 : j - 1;
    for (std::size_t k = k0; k < n; ++k) {
      const double zjk = z(j, k);
      if (zjk == 0.0 && k == k0) continue;
      for (std::size_t i = 0; i < rows; ++i) out(i, j) += m(i, k) * zjk;
      ++terms;
    }
  }
  ctx.muls += terms * rows;
  ctx.adds += terms * rows;
  return out;
}

// Principal real square root via the real Schur method: X = Q Z Q^T with
// all branch signs positive.
inline DenseMatrix sqrtm_real(const DenseMatrix& a, FlopCounter& ctx) {
  if (!a.square()) throw ShapeError("sqrtm_real: matrix must be square");
  RealSchurForm schur = real_schur(a, ctx);
  std::size_t num_groups = 0;
  const std::vector<int> groups =
      detail::group_blocks(schur.R, schur.blocks, &num_groups);
  const BranchChoice branch = BranchChoice::principal(groups, num_groups);
  QuasiTriangularRoot root =
      sqrt_quasi_triangular(schur.R, schur.blocks, branch, ctx);
  // X = Q * (Z * Q^T), both products taken dense as in standard sqrtm
  // implementations.
  DenseMatrix zqt = mat_mul(root.Z, schur.Q.transposed(), ctx);
  return mat_mul(schur.Q, zqt, ctx);
}

inline DenseMatrix sqrtm_real(const DenseMatrix& a) {
  FlopCounter scratch;
  return sqrtm_real(a, scratch);
}

// All real square roots of A that are functions of A: 2^(r+c) of them,
// enumerated over the sign of each eigenvalue group.
inline std::vector<DenseMatrix> enumerate_real_root_functions(
    const DenseMatrix& a, std::size_t cap = 10) {
  FlopCounter ctx;
  RealSchurForm schur = real_schur(a, ctx);
  std::size_t num_groups = 0;
  const std::vector<int> groups =
      detail::group_blocks(schur.R, schur.blocks, &num_groups);
  if (num_groups > cap)
    throw TooManyBranchesError(
        "enumerate_real_root_functions: more eigenvalue groups than cap");
  // Reject negative real eigenvalues up front.
  const double tol = std::numeric_limits<double>::epsilon() * frobenius_norm(schur.R);
  for (const SchurBlock& b : schur.blocks) {
    if (b.size == 1) {
      const double r = schur.R(b.start, b.start);
      if (std::fabs(r) <= tol)
        throw SingularMatrixError("enumerate_real_root_functions: singular");
      if (r < 0.0)
        throw NegativeRealEigenvalueError(
            "enumerate_real_root_functions: negative real eigenvalue");
    }
  }
  std::vector<DenseMatrix> roots;
  const std::size_t count = std::size_t{1} << num_groups;
  const DenseMatrix qt = schur.Q.transposed();
  for (std::size_t mask = 0; mask < count; ++mask) {
    BranchChoice branch{groups, std::vector<int>(num_groups, +1)};
    for (std::size_t g = 0; g < num_groups; ++g)
      if (mask & (std::size_t{1} << g)) branch.group_sign[g] = -1;
    QuasiTriangularRoot root =
        sqrt_quasi_triangular(schur.R, schur.blocks, branch, ctx);
    DenseMatrix zqt = quasi_tri_mat_mul(root.Z, qt, ctx);
    roots.push_back(mat_mul(schur.Q, zqt, ctx));
  }
  return roots;
}

}  // namespace shsqrt
