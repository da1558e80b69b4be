#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "shsqrt/matrix.hpp"
#include "shsqrt/schur.hpp"
#include "shsqrt/smallsolve.hpp"
#include "shsqrt/sqrtm.hpp"
#include "shsqrt/symplectic.hpp"

namespace shsqrt {

enum class RootKind { SkewHamiltonian, Hamiltonian };

struct StructuredRoot {
  DenseMatrix X;     // quasi-triangular root of N1
  DenseMatrix Y;     // skew-symmetric (Alg. 2) or symmetric (Alg. 3)
  RootKind kind = RootKind::SkewHamiltonian;
  DenseMatrix root;  // the full 2n x 2n square root
};

namespace detail {

// X_ii * Y_ij + sgn * Y_ij * X_jj^T = C, vectorized column-major and solved
// with complete pivoting (sgn = +1, Lyapunov branch) or minimal-norm least
// squares (sgn = -1, the singular branch).
inline DenseMatrix build_small_operator(const DenseMatrix& x, std::size_t i0,
                                        std::size_t p, std::size_t j0,
                                        std::size_t q, double sgn) {
  DenseMatrix sys(p * q, p * q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t k = 0; k < p; ++k)
        sys(a * p + i, a * p + k) += x(i0 + i, i0 + k);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t c = 0; c < q; ++c)
      for (std::size_t i = 0; i < p; ++i)
        sys(a * p + i, c * p + i) += sgn * x(j0 + a, j0 + c);
  return sys;
}

inline std::vector<double> vec_cm(const DenseMatrix& m) {
  std::vector<double> v(m.rows() * m.cols());
  for (std::size_t a = 0; a < m.cols(); ++a)
    for (std::size_t i = 0; i < m.rows(); ++i) v[a * m.rows() + i] = m(i, a);
  return v;
}

inline DenseMatrix unvec_cm(const std::vector<double>& v, std::size_t p,
                            std::size_t q) {
  DenseMatrix m(p, q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t i = 0; i < p; ++i) m(i, a) = v[a * p + i];
  return m;
}

// Correction C = N_ij - sum_{k>i} X_ik Y_kj - sgn * sum_{k>j} Y_ik X_jk^T,
// reading already-solved blocks from the fully mirrored Y.
inline DenseMatrix recursion_rhs(const DenseMatrix& x, const DenseMatrix& y,
                                 const DenseMatrix& n2,
                                 const std::vector<SchurBlock>& blocks,
                                 std::size_t bi, std::size_t bj, double sgn,
                                 FlopCounter& ctx) {
  const std::size_t m = blocks.size();
  const std::size_t i0 = blocks[bi].start, p = blocks[bi].size;
  const std::size_t j0 = blocks[bj].start, q = blocks[bj].size;
  DenseMatrix c = n2.block(i0, j0, p, q);
  for (std::size_t bk = bi + 1; bk < m; ++bk) {
    const std::size_t k0 = blocks[bk].start, s = blocks[bk].size;
    c -= mat_mul(x.block(i0, k0, p, s), y.block(k0, j0, s, q), ctx);
  }
  for (std::size_t bk = bj + 1; bk < m; ++bk) {
    const std::size_t k0 = blocks[bk].start, s = blocks[bk].size;
    const DenseMatrix term =
        mat_mul(y.block(i0, k0, p, s), x.block(j0, k0, q, s).transposed(), ctx);
    if (sgn > 0)
      c -= term;
    else
      c += term;
  }
  return c;
}

}  // namespace detail

// Solves X Y + Y X^T = N2 for skew-symmetric Y by block back-substitution
// over i = m..1, j = i..1. Unique when X and -X^T have disjoint spectra
// (guaranteed for a principal-branch X).
inline DenseMatrix solve_structured_lyapunov(const DenseMatrix& x,
                                             const std::vector<SchurBlock>& blocks,
                                             const DenseMatrix& n2,
                                             FlopCounter& ctx) {
  const std::size_t n = x.rows();
  const std::size_t m = blocks.size();
  DenseMatrix y(n, n);
  for (std::size_t bi = m; bi-- > 0;) {
    for (std::size_t bj = bi + 1; bj-- > 0;) {
      const std::size_t i0 = blocks[bi].start, p = blocks[bi].size;
      const std::size_t j0 = blocks[bj].start, q = blocks[bj].size;
      // The k > j correction must not include the unknown itself; on the
      // diagonal the unknown's transposed term is part of the operator.
      DenseMatrix c(p, q);
      if (bi == bj) {
        c = n2.block(i0, j0, p, q);
        for (std::size_t bk = bi + 1; bk < m; ++bk) {
          const std::size_t k0 = blocks[bk].start, s = blocks[bk].size;
          c -= mat_mul(x.block(i0, k0, p, s), y.block(k0, j0, s, q), ctx);
          c -= mat_mul(y.block(i0, k0, p, s),
                       x.block(j0, k0, q, s).transposed(), ctx);
        }
      } else {
        c = detail::recursion_rhs(x, y, n2, blocks, bi, bj, +1.0, ctx);
      }
      DenseMatrix sys = detail::build_small_operator(x, i0, p, j0, q, +1.0);
      std::vector<double> sol;
      try {
        sol = solve_complete_pivoting(sys, detail::vec_cm(c), ctx);
      } catch (const SylvesterSingularError&) {
        throw SylvesterSingularError(
            "solve_structured_lyapunov: singular block system; spectra of X "
            "and -X^T are not disjoint");
      }
      DenseMatrix yij = detail::unvec_cm(sol, p, q);
      if (bi == bj) {
        // Exact skewness on the diagonal block.
        for (std::size_t i = 0; i < p; ++i) {
          yij(i, i) = 0.0;
          for (std::size_t j = i + 1; j < p; ++j) {
            const double v = 0.5 * (yij(i, j) - yij(j, i));
            yij(i, j) = v;
            yij(j, i) = -v;
          }
        }
        y.set_block(i0, j0, yij);
      } else {
        y.set_block(i0, j0, yij);
        // Mirror: Y_ji = -Y_ij^T.
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t j = 0; j < q; ++j) y(j0 + j, i0 + i) = -yij(i, j);
      }
    }
  }
  detail::skew_symmetrize(y);
  return y;
}

namespace detail {

// Free directions and the consistency row of the diagonal block system of
// X Y - Y X^T = C with Y symmetric. q = 1: the single unknown is always
// free. q = 2: the unknowns (y11, y12, y22) satisfy one scalar equation.
struct SymDiagSolve {
  DenseMatrix y;                        // minimal-norm particular solution
  std::vector<DenseMatrix> free_dirs;   // basis of the block's free space
};

inline SymDiagSolve solve_symmetric_diagonal(const DenseMatrix& x,
                                             std::size_t i0, std::size_t p,
                                             const DenseMatrix& c, double tol) {
  SymDiagSolve out;
  out.y = DenseMatrix(p, p);
  if (p == 1) {
    // 0 * y = c; consistent only for c ~ 0, y free.
    if (std::fabs(c(0, 0)) > tol)
      throw InconsistentSystemError(
          "solve_singular_sylvester: inconsistent 1x1 diagonal block");
    DenseMatrix d(1, 1);
    d(0, 0) = 1.0;
    out.free_dirs.push_back(d);
    return out;
  }
  // p == 2. E = X Y - Y X^T is skew; its (0,1) entry in the scaled
  // symmetric coordinates z = (y11, sqrt(2) y12, y22) gives one row.
  const double a = x(i0, i0), b = x(i0, i0 + 1);
  const double cc = x(i0 + 1, i0), d = x(i0 + 1, i0 + 1);
  const double s2 = std::sqrt(2.0);
  const double row[3] = {-cc, (a - d) / s2, b};
  const double rhs = c(0, 1);
  const double rn2 = row[0] * row[0] + row[1] * row[1] + row[2] * row[2];
  double z[3] = {0.0, 0.0, 0.0};
  if (rn2 <= tol * tol) {
    if (std::fabs(rhs) > tol)
      throw InconsistentSystemError(
          "solve_singular_sylvester: inconsistent 2x2 diagonal block");
  } else {
    const double f = rhs / rn2;
    z[0] = row[0] * f;
    z[1] = row[1] * f;
    z[2] = row[2] * f;
  }
  out.y(0, 0) = z[0];
  out.y(0, 1) = out.y(1, 0) = z[1] / s2;
  out.y(1, 1) = z[2];
  // Orthonormal basis of the null space of the row (dimension 2, or 3 when
  // the row vanishes) in the scaled coordinates.
  std::vector<std::vector<double>> dirs;
  const double rn = std::sqrt(std::max(rn2, 0.0));
  for (int e = 0; e < 3; ++e) {
    std::vector<double> v(3, 0.0);
    v[e] = 1.0;
    if (rn > 0.0) {
      const double proj = row[e] / rn;
      for (int k = 0; k < 3; ++k) v[k] -= proj * row[k] / rn;
    }
    // Gram-Schmidt against already-collected directions.
    for (const auto& u : dirs) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += v[k] * u[k];
      for (int k = 0; k < 3; ++k) v[k] -= dot * u[k];
    }
    double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (norm > 1e-10) {
      for (double& t : v) t /= norm;
      dirs.push_back(v);
    }
    if (dirs.size() == 2 && rn > 0.0) break;
    if (dirs.size() == 3) break;
  }
  for (const auto& v : dirs) {
    DenseMatrix dm(2, 2);
    dm(0, 0) = v[0];
    dm(0, 1) = dm(1, 0) = v[1] / s2;
    dm(1, 1) = v[2];
    out.free_dirs.push_back(dm);
  }
  return out;
}

struct SingularSylvesterSolution {
  DenseMatrix y;
  std::vector<DenseMatrix> kernel;  // symmetric solutions of X K = K X^T
};

// Runs the block recursion for X Y - Y X^T = N2 with the given choices for
// the diagonal free components (one DenseMatrix per diagonal block, empty
// meaning minimal-norm zero).
inline DenseMatrix singular_recursion(
    const DenseMatrix& x, const std::vector<SchurBlock>& blocks,
    const DenseMatrix& n2, const std::vector<DenseMatrix>* diag_overrides,
    double tol, FlopCounter& ctx) {
  const std::size_t n = x.rows();
  const std::size_t m = blocks.size();
  DenseMatrix y(n, n);
  for (std::size_t bi = m; bi-- > 0;) {
    for (std::size_t bj = bi + 1; bj-- > 0;) {
      const std::size_t i0 = blocks[bi].start, p = blocks[bi].size;
      const std::size_t j0 = blocks[bj].start, q = blocks[bj].size;
      if (bi == bj) {
        DenseMatrix c = n2.block(i0, j0, p, q);
        for (std::size_t bk = bi + 1; bk < m; ++bk) {
          const std::size_t k0 = blocks[bk].start, s = blocks[bk].size;
          c -= mat_mul(x.block(i0, k0, p, s), y.block(k0, j0, s, q), ctx);
          c += mat_mul(y.block(i0, k0, p, s),
                       x.block(j0, k0, q, s).transposed(), ctx);
        }
        SymDiagSolve ds = solve_symmetric_diagonal(x, i0, p, c, tol);
        DenseMatrix yii = ds.y;
        if (diag_overrides && !(*diag_overrides)[bi].data().empty())
          yii += (*diag_overrides)[bi];
        y.set_block(i0, j0, yii);
      } else {
        DenseMatrix c =
            recursion_rhs(x, y, n2, blocks, bi, bj, -1.0, ctx);
        DenseMatrix sys = build_small_operator(x, i0, p, j0, q, -1.0);
        std::vector<double> rhs = vec_cm(c);
        std::vector<double> sol = solve_min_norm(sys, rhs, ctx);
        // Consistency: residual of the small system.
        double res2 = 0.0, rhs2 = 0.0;
        for (std::size_t i = 0; i < rhs.size(); ++i) {
          double ri = -rhs[i];
          for (std::size_t k = 0; k < rhs.size(); ++k) ri += sys(i, k) * sol[k];
          res2 += ri * ri;
          rhs2 += rhs[i] * rhs[i];
        }
        if (std::sqrt(res2) > tol * std::max(1.0, std::sqrt(rhs2)))
          throw InconsistentSystemError(
              "solve_singular_sylvester: inconsistent off-diagonal block");
        DenseMatrix yij = unvec_cm(sol, p, q);
        y.set_block(i0, j0, yij);
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t j = 0; j < q; ++j) y(j0 + j, i0 + i) = yij(i, j);
      }
    }
  }
  symmetrize(y);
  return y;
}

}  // namespace detail

// Solves the singular symmetric Sylvester equation X Y - Y X^T = N2 for the
// minimal-Frobenius-norm symmetric Y. A particular solution comes from the
// block recursion with per-block minimal-norm choices; it is then projected
// against the solution-set kernel (spanned by the recursion run with zero
// right-hand side and unit free components) so the result matches the
// pseudoinverse solution of the full vectorized system.
inline DenseMatrix solve_singular_sylvester(const DenseMatrix& x,
                                            const std::vector<SchurBlock>& blocks,
                                            const DenseMatrix& n2,
                                            FlopCounter& ctx) {
  const double tol = 1e-8 * std::max(1.0, frobenius_norm(n2));
  DenseMatrix y = detail::singular_recursion(x, blocks, n2, nullptr, tol, ctx);

  // Kernel basis: one recursion per free diagonal direction.
  const std::size_t m = blocks.size();
  const std::size_t n = x.rows();
  DenseMatrix zero(n, n);
  std::vector<DenseMatrix> kernel;
  const double ktol = 1e-8;
  for (std::size_t b = 0; b < m; ++b) {
    const std::size_t i0 = blocks[b].start, p = blocks[b].size;
    DenseMatrix zc(p, p);
    detail::SymDiagSolve ds =
        detail::solve_symmetric_diagonal(x, i0, p, zc, ktol);
    for (const DenseMatrix& dir : ds.free_dirs) {
      std::vector<DenseMatrix> overrides(m);
      overrides[b] = dir;
      try {
        kernel.push_back(
            detail::singular_recursion(x, blocks, zero, &overrides, ktol, ctx));
      } catch (const InconsistentSystemError&) {
        // Degenerate spectrum; skip this direction, the particular solution
        // is still valid.
      }
    }
  }
  if (!kernel.empty()) {
    // Project y onto the orthogonal complement of span(kernel).
    const std::size_t kdim = kernel.size();
    DenseMatrix gram(kdim, kdim);
    std::vector<double> rhs(kdim, 0.0);
    for (std::size_t a = 0; a < kdim; ++a) {
      for (std::size_t b = 0; b < kdim; ++b) {
        double dot = 0.0;
        for (std::size_t k = 0; k < kernel[a].data().size(); ++k)
          dot += kernel[a].data()[k] * kernel[b].data()[k];
        gram(a, b) = dot;
      }
      double dot = 0.0;
      for (std::size_t k = 0; k < y.data().size(); ++k)
        dot += kernel[a].data()[k] * y.data()[k];
      rhs[a] = dot;
    }
    const std::vector<double> coef = solve_min_norm(gram, rhs, ctx);
    for (std::size_t a = 0; a < kdim; ++a)
      y -= coef[a] * kernel[a];
  }
  detail::symmetrize(y);
  return y;
}

namespace detail {

// Assembles U Z U^T for Z = [[X, Y], [0, t*X^T]] (t = +1 skew-Hamiltonian,
// t = -1 Hamiltonian), exploiting the orthogonal-symplectic block form of U
// and the structure of the result (its lower-right block is determined by
// the upper-left one).
inline DenseMatrix assemble_full_root(const OrthogonalSymplectic& u,
                                      const DenseMatrix& x, const DenseMatrix& y,
                                      RootKind kind, FlopCounter& ctx) {
  const double t = (kind == RootKind::SkewHamiltonian) ? 1.0 : -1.0;
  const std::size_t n = x.rows();
  // Left half first: U * Z = [[P1, S1], [-P2, S2]] with S1 = U1 Y + t U2 X^T
  // and S2 = t U1 X^T - U2 Y; X quasi-triangular keeps four of the six
  // products at half cost.
  const DenseMatrix p1 = mat_mul_quasi_tri(u.U1, x, ctx);
  const DenseMatrix p2 = mat_mul_quasi_tri(u.U2, x, ctx);
  DenseMatrix s1 = mat_mul(u.U1, y, ctx);
  DenseMatrix s2 = mat_mul_quasi_tri_transposed(u.U1, x, ctx);
  {
    const DenseMatrix r2 = mat_mul_quasi_tri_transposed(u.U2, x, ctx);
    const DenseMatrix q2 = mat_mul(u.U2, y, ctx);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        s1(i, j) += t * r2(i, j);
        s2(i, j) = t * s2(i, j) - q2(i, j);
      }
    ctx.adds += 2 * n * n;
  }
  // R = (U Z) U^T. The upper-left block is dense; the off-diagonal blocks
  // are skew (Alg. 2) or symmetric (Alg. 3), so only their upper triangles
  // are formed and the rest mirrored; the lower-right block is +-R11^T.
  DenseMatrix r11 = mat_mul(p1, u.U1.transposed(), ctx) +
                    mat_mul(s1, u.U2.transposed(), ctx);
  ctx.adds += n * n;
  const double mir = (kind == RootKind::SkewHamiltonian) ? -1.0 : 1.0;
  auto mirrored_product = [&](const DenseMatrix& a, const DenseMatrix& b,
                              const DenseMatrix& w2, const DenseMatrix& w1) {
    // out = b * w1^T - a * w2^T, known skew (mir = -1) or symmetric (+1).
    DenseMatrix out(n, n);
    std::uint64_t terms = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = (mir < 0) ? i + 1 : i; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k)
          acc += b(i, k) * w1(j, k) - a(i, k) * w2(j, k);
        out(i, j) = acc;
        out(j, i) = mir * acc;
        terms += 2 * n;
      }
    ctx.muls += terms;
    ctx.adds += terms;
    return out;
  };
  const DenseMatrix r12 = mirrored_product(p1, s1, u.U2, u.U1);
  const DenseMatrix r21 = mirrored_product(p2, s2, u.U1, u.U2);
  DenseMatrix full(2 * n, 2 * n);
  full.set_block(0, 0, r11);
  full.set_block(0, n, r12);
  full.set_block(n, 0, r21);
  DenseMatrix r22 = r11.transposed();
  if (kind == RootKind::Hamiltonian) r22 *= -1.0;
  full.set_block(n, n, r22);
  return full;
}

inline void reject_bad_spectrum(const SkewHamiltonianSchurForm& shs,
                                const char* who) {
  const double tol =
      std::numeric_limits<double>::epsilon() * frobenius_norm(shs.N1);
  for (const SchurBlock& b : shs.blocks) {
    if (b.size == 1) {
      const double r = shs.N1(b.start, b.start);
      if (std::fabs(r) <= tol)
        throw SingularMatrixError(std::string(who) + ": singular input");
      if (r < 0.0)
        throw NegativeRealEigenvalueError(
            std::string(who) + ": input has a negative real eigenvalue");
    } else {
      const std::size_t i = b.start;
      const double theta = 0.5 * (shs.N1(i, i) + shs.N1(i + 1, i + 1));
      const double half = 0.5 * (shs.N1(i, i) - shs.N1(i + 1, i + 1));
      const double inside =
          -half * half - shs.N1(i, i + 1) * shs.N1(i + 1, i);
      if (std::hypot(theta, std::sqrt(std::max(inside, 0.0))) <= tol)
        throw SingularMatrixError(std::string(who) + ": singular input");
    }
  }
}

}  // namespace detail

// Algorithm: skew-Hamiltonian Schur form, principal root of N1, structured
// Lyapunov solve, then the back-transformation. The result is a
// skew-Hamiltonian square root that is a function of W.
inline StructuredRoot sqrt_skew_hamiltonian(const SkewHamiltonianMatrix& w,
                                            FlopCounter& ctx) {
  SkewHamiltonianSchurForm shs = skew_hamiltonian_schur(w, ctx);
  detail::reject_bad_spectrum(shs, "sqrt_skew_hamiltonian");
  std::size_t num_groups = 0;
  const std::vector<int> groups =
      detail::group_blocks(shs.N1, shs.blocks, &num_groups);
  QuasiTriangularRoot xroot = sqrt_quasi_triangular(
      shs.N1, shs.blocks, BranchChoice::principal(groups, num_groups), ctx);
  DenseMatrix y = solve_structured_lyapunov(xroot.Z, shs.blocks, shs.N2, ctx);
  StructuredRoot out;
  out.kind = RootKind::SkewHamiltonian;
  out.root = detail::assemble_full_root(shs.U, xroot.Z, y,
                                        RootKind::SkewHamiltonian, ctx);
  out.X = std::move(xroot.Z);
  out.Y = std::move(y);
  return out;
}

// Hamiltonian square root of a skew-Hamiltonian matrix (not a function of
// W): same pipeline with the singular symmetric Sylvester solve.
inline StructuredRoot sqrt_hamiltonian(const SkewHamiltonianMatrix& w,
                                       FlopCounter& ctx) {
  SkewHamiltonianSchurForm shs = skew_hamiltonian_schur(w, ctx);
  detail::reject_bad_spectrum(shs, "sqrt_hamiltonian");
  std::size_t num_groups = 0;
  const std::vector<int> groups =
      detail::group_blocks(shs.N1, shs.blocks, &num_groups);
  QuasiTriangularRoot xroot = sqrt_quasi_triangular(
      shs.N1, shs.blocks, BranchChoice::principal(groups, num_groups), ctx);
  DenseMatrix y = solve_singular_sylvester(xroot.Z, shs.blocks, shs.N2, ctx);
  StructuredRoot out;
  out.kind = RootKind::Hamiltonian;
  out.root = detail::assemble_full_root(shs.U, xroot.Z, y,
                                        RootKind::Hamiltonian, ctx);
  out.X = std::move(xroot.Z);
  out.Y = std::move(y);
  return out;
}

}  // namespace shsqrt
