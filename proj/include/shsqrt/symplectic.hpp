#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "shsqrt/kernels.hpp"
#include "shsqrt/matrix.hpp"
#include "shsqrt/schur.hpp"

namespace shsqrt {

inline DenseMatrix symplectic_j(std::size_t half) {
  DenseMatrix j(2 * half, 2 * half);
  for (std::size_t i = 0; i < half; ++i) {
    j(i, half + i) = 1.0;
    j(half + i, i) = -1.0;
  }
  return j;
}

// Compact representation of W = [[A, G], [F, A^T]] with G, F exactly
// skew-symmetric.
struct SkewHamiltonianMatrix {
  std::size_t n = 0;  // half-order
  DenseMatrix A;
  DenseMatrix G;
  DenseMatrix F;

  DenseMatrix full() const {
    DenseMatrix w(2 * n, 2 * n);
    w.set_block(0, 0, A);
    w.set_block(0, n, G);
    w.set_block(n, 0, F);
    w.set_block(n, n, A.transposed());
    return w;
  }
};

// W is skew-Hamiltonian iff ||WJ + (WJ)^T||_F <= tol * ||W||_F.
inline bool validate_skew_hamiltonian(const DenseMatrix& m, double tol) {
  if (!m.square() || m.rows() % 2 != 0)
    throw ShapeError("validate_skew_hamiltonian: order must be even");
  const std::size_t n = m.rows() / 2;
  // (WJ)(i,j) for J = [[0,I],[-I,0]]: WJ = [-W(:,n:2n) | W(:,0:n)] ... column
  // j of WJ is -W(:, j+n) for j < n and W(:, j-n) for j >= n.
  double defect2 = 0.0;
  const std::size_t order = 2 * n;
  auto wj = [&](std::size_t i, std::size_t j) {
    return (j < n) ? -m(i, j + n) : m(i, j - n);
  };
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; j < order; ++j) {
      const double t = wj(i, j) + wj(j, i);
      defect2 += t * t;
    }
  return std::sqrt(defect2) <= tol * frobenius_norm(m);
}

namespace detail {

inline void skew_symmetrize(DenseMatrix& m) {
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m(i, j) - m(j, i));
      m(i, j) = v;
      m(j, i) = -v;
    }
  }
}

inline void symmetrize(DenseMatrix& m) {
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
}

}  // namespace detail

// Extracts (A, G, F) from a full matrix, folding any rounding-level
// structure drift back into the exact block form.
inline SkewHamiltonianMatrix pack(const DenseMatrix& m, double tol) {
  if (!validate_skew_hamiltonian(m, tol))
    throw StructureError("pack: matrix is not skew-Hamiltonian at tolerance");
  const std::size_t n = m.rows() / 2;
  SkewHamiltonianMatrix w;
  w.n = n;
  DenseMatrix a = m.block(0, 0, n, n);
  const DenseMatrix d = m.block(n, n, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (a(i, j) + d(j, i));
  w.A = std::move(a);
  w.G = m.block(0, n, n, n);
  w.F = m.block(n, 0, n, n);
  detail::skew_symmetrize(w.G);
  detail::skew_symmetrize(w.F);
  return w;
}

// U orthogonal-symplectic, stored by its independent blocks:
// U = [[U1, U2], [-U2, U1]].
struct OrthogonalSymplectic {
  DenseMatrix U1;
  DenseMatrix U2;

  static OrthogonalSymplectic identity(std::size_t n) {
    return {DenseMatrix::identity(n), DenseMatrix(n, n)};
  }

  DenseMatrix full() const {
    const std::size_t n = U1.rows();
    DenseMatrix u(2 * n, 2 * n);
    u.set_block(0, 0, U1);
    u.set_block(0, n, U2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) u(n + i, j) = -U2(i, j);
    u.set_block(n, n, U1);
    return u;
  }
};

struct PVLForm {
  OrthogonalSymplectic U;
  DenseMatrix W1;  // upper Hessenberg
  DenseMatrix W2;  // skew-symmetric
};

struct SkewHamiltonianSchurForm {
  OrthogonalSymplectic U;
  DenseMatrix N1;  // quasi-upper-triangular
  DenseMatrix N2;  // skew-symmetric
  std::vector<SchurBlock> blocks;
};

namespace detail {

// Two-sided Householder update M <- PMP for skew-symmetric M, with P acting
// on rows r0..r0+len. Since v^T M v = 0 the update is the rank-2 correction
// M + beta*v*u^T - beta*u*v^T with u = Mv, applied to the upper triangle and
// mirrored. Rows/columns below `lo` are known to be zero and are skipped.
inline void skew_rank2_similarity(DenseMatrix& m, const HouseholderReflector& h,
                                  std::size_t r0, std::size_t lo,
                                  FlopCounter& ctx) {
  if (h.beta == 0.0) return;
  const std::size_t n = m.rows();
  const std::size_t len = h.v.size();
  std::vector<double> u(n - lo, 0.0);
  for (std::size_t i = lo; i < n; ++i) {
    double s = 0.0;
    for (std::size_t t = 0; t < len; ++t) s += m(i, r0 + t) * h.v[t];
    u[i - lo] = s;
  }
  ctx.muls += len * (n - lo);
  ctx.adds += len * (n - lo);
  std::vector<double> bv(n - lo, 0.0);
  for (std::size_t t = 0; t < len; ++t) bv[r0 + t - lo] = h.beta * h.v[t];
  ctx.muls += len;
  std::uint64_t touched = 0;
  for (std::size_t i = lo; i < r0 + len && i < n; ++i) {
    const double bvi = bv[i - lo], ui = u[i - lo];
    const bool i_in = i >= r0;
    // Entries with both indices outside the reflector's support are fixed;
    // for rows above the support only columns inside it move.
    const std::size_t k_hi = i_in ? n : r0 + len;
    for (std::size_t k = std::max(i + 1, r0); k < k_hi; ++k) {
      const double d = bvi * u[k - lo] - ui * bv[k - lo];
      m(i, k) += d;
      m(k, i) = -m(i, k);
      ++touched;
    }
  }
  ctx.muls += 2 * touched;
  ctx.adds += 2 * touched;
  for (std::size_t t = 0; t < len; ++t) m(r0 + t, r0 + t) = 0.0;
}

// Similarity by H+H (the same reflector on both halves, rows r0..) applied
// to the compact blocks at elimination column j: A <- PAP (columns < j of
// the affected rows are already zero), G and F by the skew rank-2 form.
inline void householder_pair_similarity(SkewHamiltonianMatrix& w,
                                        const HouseholderReflector& h,
                                        std::size_t r0, std::size_t j,
                                        std::size_t f_lo, FlopCounter& ctx) {
  const std::size_t n = w.n;
  apply_householder_left(h, w.A, r0, j, n, ctx);
  apply_householder_right(h, w.A, r0, 0, n, ctx);
  skew_rank2_similarity(w.G, h, r0, 0, ctx);
  skew_rank2_similarity(w.F, h, r0, f_lo, ctx);
}

// Similarity by the symplectic rotation acting on the plane (k, n+k),
// written out on the compact blocks. Entry formulas come from applying the
// rotation on both sides at once; only row/column k of each block moves,
// the (k,k) entry of A is invariant and the skew diagonals stay zero.
inline void symplectic_givens_similarity(SkewHamiltonianMatrix& w, std::size_t k,
                                         double c, double s, FlopCounter& ctx) {
  const std::size_t n = w.n;
  std::vector<double> arow(n), acol(n), frow(n), gcol(n);
  for (std::size_t j = 0; j < n; ++j) {
    arow[j] = w.A(k, j);
    acol[j] = w.A(j, k);
    frow[j] = w.F(k, j);
    gcol[j] = w.G(j, k);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (j == k) continue;
    w.A(k, j) = c * arow[j] - s * frow[j];
    w.A(j, k) = c * acol[j] - s * gcol[j];
    const double f = s * arow[j] + c * frow[j];
    w.F(k, j) = f;
    w.F(j, k) = -f;
    const double g = s * acol[j] + c * gcol[j];
    w.G(j, k) = g;
    w.G(k, j) = -g;
  }
  w.F(k, k) = 0.0;
  w.G(k, k) = 0.0;
  ctx.muls += 8 * n;
  ctx.adds += 4 * n;
}

// One elimination column of the reduction: reflector clearing F below the
// subdiagonal, the symplectic rotation folding the leftover entry into A,
// and the reflector restoring the Hessenberg pattern of A.
struct PvlStep {
  std::size_t j = 0;
  bool has_reflectors = false;
  HouseholderReflector h1;
  HouseholderReflector h2;
  double c = 1.0;
  double s = 0.0;
};

// V <- F_j * V for the compact pair V = [[V1, V2], [-V2, V1]], with
// F_j = H1 * G * H2 (the per-column factor of the accumulated U).
inline void apply_pvl_step_left(const PvlStep& st, DenseMatrix& v1,
                                DenseMatrix& v2, FlopCounter& ctx) {
  const std::size_t cols = v1.cols();
  const std::size_t k = st.j + 1;
  if (st.has_reflectors) {
    apply_householder_left(st.h2, v1, k, 0, cols, ctx);
    apply_householder_left(st.h2, v2, k, 0, cols, ctx);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    const double x = v1(k, c), y = v2(k, c);
    v1(k, c) = st.c * x - st.s * y;
    v2(k, c) = st.c * y + st.s * x;
  }
  ctx.muls += 4 * cols;
  ctx.adds += 2 * cols;
  if (st.has_reflectors) {
    apply_householder_left(st.h1, v1, k, 0, cols, ctx);
    apply_householder_left(st.h1, v2, k, 0, cols, ctx);
  }
}

// N = Q^T S Q for skew-symmetric S: one full product, then only the upper
// triangle of the congruence, mirrored exactly.
inline DenseMatrix skew_congruence(const DenseMatrix& q, const DenseMatrix& s,
                                   FlopCounter& ctx) {
  const std::size_t n = q.rows();
  const DenseMatrix t = mat_mul(s, q, ctx);
  DenseMatrix out(n, n);
  std::uint64_t terms = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += q(k, i) * t(k, j);
      out(i, j) = acc;
      out(j, i) = -acc;
      terms += n;
    }
  ctx.muls += terms;
  ctx.adds += terms;
  return out;
}

// Runs the elimination schedule in place and returns the factor sequence.
// Per column j: a Householder pair clears F(j+1:, j) down to one entry, a
// symplectic rotation folds that entry into A, and a second Householder
// pair restores the Hessenberg pattern of A.
inline std::vector<PvlStep> pvl_reduce_steps(SkewHamiltonianMatrix& w,
                                             FlopCounter& ctx) {
  const std::size_t n = w.n;
  std::vector<PvlStep> steps;
  if (n > 1) steps.reserve(n - 1);

  for (std::size_t j = 0; j + 1 < n; ++j) {
    PvlStep st;
    st.j = j;
    // Clear F(j+2:n, j) into F(j+1, j).
    if (j + 2 < n) {
      st.has_reflectors = true;
      std::vector<double> x(n - j - 1);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = w.F(j + 1 + i, j);
      st.h1 = make_householder(x);
      detail::householder_pair_similarity(w, st.h1, j + 1, j, j, ctx);
      for (std::size_t i = j + 2; i < n; ++i) {
        w.F(i, j) = 0.0;
        w.F(j, i) = 0.0;
      }
    }
    // Fold F(j+1, j) into A(j+1, j): pick (c, s) with
    // s*A(j+1,j) + c*F(j+1,j) = 0 so the transformed F entry vanishes.
    {
      const GivensRotation g = make_givens(w.A(j + 1, j), w.F(j + 1, j));
      st.c = g.c;
      st.s = -g.s;
      detail::symplectic_givens_similarity(w, j + 1, st.c, st.s, ctx);
      w.F(j + 1, j) = 0.0;
      w.F(j, j + 1) = 0.0;
    }
    // Restore Hessenberg form in column j of A.
    if (j + 2 < n) {
      std::vector<double> x(n - j - 1);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = w.A(j + 1 + i, j);
      st.h2 = make_householder(x);
      detail::householder_pair_similarity(w, st.h2, j + 1, j, j + 1, ctx);
      for (std::size_t i = j + 2; i < n; ++i) w.A(i, j) = 0.0;
    }
    steps.push_back(std::move(st));
  }
  return steps;
}

}  // namespace detail

// Paige/Van Loan reduction: U^T W U = [[W1, W2], [0, W1^T]] with W1 upper
// Hessenberg. U is the left-to-right product of the per-column factors,
// assembled by applying them to the identity from the right end inward.
inline PVLForm pvl_reduce(const SkewHamiltonianMatrix& w0, FlopCounter& ctx) {
  SkewHamiltonianMatrix w = w0;
  const std::size_t n = w.n;
  const std::vector<detail::PvlStep> steps = detail::pvl_reduce_steps(w, ctx);

  PVLForm form;
  form.U = OrthogonalSymplectic::identity(n);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    detail::apply_pvl_step_left(*it, form.U.U1, form.U.U2, ctx);
  form.W1 = std::move(w.A);
  form.W2 = std::move(w.G);
  // Exact structural zeros.
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 2; i < n; ++i) form.W1(i, j) = 0.0;
  detail::skew_symmetrize(form.W2);
  return form;
}

// Composes the PVL reduction with a real Schur decomposition of W1. The
// accumulated transform is built once as U = (PVL factors) * diag(Q, Q) by
// seeding the block pair with Q and folding the factors in from the left.
inline SkewHamiltonianSchurForm skew_hamiltonian_schur(
    const SkewHamiltonianMatrix& w, FlopCounter& ctx) {
  SkewHamiltonianMatrix wk = w;
  const std::size_t n = wk.n;
  const std::vector<detail::PvlStep> steps = detail::pvl_reduce_steps(wk, ctx);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 2; i < n; ++i) wk.A(i, j) = 0.0;
  detail::skew_symmetrize(wk.G);

  RealSchurForm schur = francis_qr(wk.A, DenseMatrix::identity(n), ctx);

  SkewHamiltonianSchurForm shs;
  shs.N1 = std::move(schur.R);
  shs.blocks = std::move(schur.blocks);
  shs.N2 = detail::skew_congruence(schur.Q, wk.G, ctx);
  shs.U.U1 = std::move(schur.Q);
  shs.U.U2 = DenseMatrix(n, n);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    detail::apply_pvl_step_left(*it, shs.U.U1, shs.U.U2, ctx);
  return shs;
}

inline SkewHamiltonianSchurForm skew_hamiltonian_schur(
    const SkewHamiltonianMatrix& w) {
  FlopCounter scratch;
  return skew_hamiltonian_schur(w, scratch);
}

}  // namespace shsqrt
