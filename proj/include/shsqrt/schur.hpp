#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "shsqrt/kernels.hpp"
#include "shsqrt/matrix.hpp"

namespace shsqrt {

struct SchurBlock {
  std::size_t start = 0;
  std::size_t size = 1;  // 1 or 2
};

// Q^T A Q = R with R quasi-upper-triangular. 2x2 blocks always carry a
// complex-conjugate eigenvalue pair; real-eigenvalue 2x2 blocks are split.
struct RealSchurForm {
  DenseMatrix Q;
  DenseMatrix R;
  std::vector<SchurBlock> blocks;
};

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
};

namespace detail {

constexpr int kMaxQrIterations = 30;

// hnorm is the norm of the full matrix, invariant under the iteration. The
// primary test is entry-local; when the neighbouring diagonal is
// indistinguishable from zero at matrix scale (e.g. skew-symmetric input,
// where the diagonal is rounding residue) the local threshold would demand
// underflow, so fall back to the matrix-scale test.
inline bool subdiag_negligible(const DenseMatrix& h, std::size_t i,
                               double hnorm) {
  const double eps = std::numeric_limits<double>::epsilon();
  double tst = std::fabs(h(i - 1, i - 1)) + std::fabs(h(i, i));
  if (tst <= eps * hnorm) tst = hnorm;
  return std::fabs(h(i, i - 1)) <=
         std::max(eps * tst, std::numeric_limits<double>::min());
}

// Splits quasi-triangular diagonal entries into the block partition,
// verifying that surviving 2x2 blocks have a nonreal pair.
inline std::vector<SchurBlock> partition_blocks(const DenseMatrix& r) {
  std::vector<SchurBlock> blocks;
  const std::size_t n = r.rows();
  std::size_t i = 0;
  while (i < n) {
    if (i + 1 < n && r(i + 1, i) != 0.0) {
      blocks.push_back({i, 2});
      i += 2;
    } else {
      blocks.push_back({i, 1});
      i += 1;
    }
  }
  return blocks;
}

}  // namespace detail

// H = Q^T A Q, H upper Hessenberg with exact zeros below the subdiagonal.
inline std::pair<DenseMatrix, DenseMatrix> hessenberg_reduce(const DenseMatrix& a,
                                                             FlopCounter& ctx) {
  if (!a.square()) throw ShapeError("hessenberg_reduce: matrix must be square");
  const std::size_t n = a.rows();
  DenseMatrix h = a;
  DenseMatrix q = DenseMatrix::identity(n);
  if (n < 3) return {q, h};
  for (std::size_t k = 0; k + 2 < n; ++k) {
    std::vector<double> x(n - k - 1);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = h(k + 1 + i, k);
    HouseholderReflector refl = make_householder(x);
    apply_householder_left(refl, h, k + 1, k, n, ctx);
    apply_householder_right(refl, h, k + 1, 0, n, ctx);
    apply_householder_right(refl, q, k + 1, 0, n, ctx);
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  return {q, h};
}

namespace detail {

// Similarity by a rotation in the (i, i+1) plane, applied to r and
// accumulated into q.
inline void rotate_similarity(DenseMatrix& r, DenseMatrix& q, std::size_t i,
                              const GivensRotation& g0, FlopCounter& ctx) {
  GivensRotation g = g0;
  g.i = i;
  g.j = i + 1;
  const std::size_t n = r.rows();
  apply_givens_left(g, r, 0, n, ctx);
  apply_givens_right(g, r, 0, n, ctx);
  apply_givens_right(g, q, 0, n, ctx);
}

// Rotates a 2x2 diagonal block with real eigenvalues into triangular form.
inline void split_real_block(DenseMatrix& r, DenseMatrix& q, std::size_t i,
                             FlopCounter& ctx) {
  const double a = r(i, i), b = r(i, i + 1);
  const double c = r(i + 1, i), d = r(i + 1, i + 1);
  const double p = 0.5 * (a - d);
  const double disc = p * p + b * c;
  if (disc < 0.0) return;  // genuinely complex pair, keep
  const double sq = std::sqrt(disc);
  // Eigenvalue of larger magnitude for a stable eigenvector.
  const double mid = 0.5 * (a + d);
  const double lam = (mid >= 0.0) ? mid + sq : mid - sq;
  // Eigenvector of [a b; c d] for lam: pick the better-conditioned row.
  double v0, v1;
  if (std::fabs(b) + std::fabs(lam - a) >= std::fabs(c) + std::fabs(lam - d)) {
    v0 = b;
    v1 = lam - a;
  } else {
    v0 = lam - d;
    v1 = c;
  }
  if (v0 == 0.0 && v1 == 0.0) {
    v0 = 1.0;
    v1 = 0.0;
  }
  GivensRotation g = make_givens(v0, v1);
  rotate_similarity(r, q, i, g, ctx);
  r(i + 1, i) = 0.0;
}

}  // namespace detail

// Francis double-shift QR on an upper-Hessenberg matrix. q0 is the
// similarity accumulated so far (identity for a fresh Hessenberg form).
inline RealSchurForm francis_qr(const DenseMatrix& h0, const DenseMatrix& q0,
                                FlopCounter& ctx) {
  if (!h0.square()) throw ShapeError("francis_qr: matrix must be square");
  const std::size_t n = h0.rows();
  DenseMatrix h = h0;
  DenseMatrix q = q0;
  if (n == 0) return {q, h, {}};

  const double hnorm = frobenius_norm(h);

  // 0-based active window [l, m].
  std::ptrdiff_t m = static_cast<std::ptrdiff_t>(n) - 1;
  int iter = 0;
  while (m > 0) {
    if (detail::subdiag_negligible(h, m, hnorm)) {
      h(m, m - 1) = 0.0;
      --m;
      iter = 0;
      continue;
    }
    // Locate the top of the unreduced window.
    std::ptrdiff_t l = 0;
    for (std::ptrdiff_t i = m; i >= 1; --i) {
      if (detail::subdiag_negligible(h, i, hnorm)) {
        h(i, i - 1) = 0.0;
        l = i;
        break;
      }
    }
    if (m == l + 1) {
      // Isolated 2x2 window: accept (real pairs are split afterwards).
      m = l - 1;
      iter = 0;
      continue;
    }
    if (++iter > detail::kMaxQrIterations)
      throw ConvergenceError("francis_qr: no convergence within 30 iterations");

    // Double-shift sum/product from the trailing 2x2 of the window;
    // exceptional shifts after 10 and 20 stalled iterations.
    double ssum, sprod;
    if (iter == 10 || iter == 20) {
      const double s = std::fabs(h(m, m - 1)) + std::fabs(h(m - 1, m - 2));
      const double h11 = 0.75 * s + h(m, m);
      ssum = 2.0 * h11;
      sprod = h11 * h11 + 0.4375 * s * s;
    } else {
      ssum = h(m - 1, m - 1) + h(m, m);
      sprod = h(m - 1, m - 1) * h(m, m) - h(m - 1, m) * h(m, m - 1);
    }

    // First column of (H - aI)(H - bI) restricted to the window.
    double p = h(l, l) * h(l, l) + h(l, l + 1) * h(l + 1, l) - ssum * h(l, l) + sprod;
    double r = h(l + 1, l) * (h(l, l) + h(l + 1, l + 1) - ssum);
    double w = h(l + 1, l) * h(l + 2, l + 1);
    ctx.muls += 6;
    ctx.adds += 6;

    for (std::ptrdiff_t k = l; k <= m - 1; ++k) {
      const std::size_t len = (k + 2 <= m) ? 3 : 2;
      if (k > l) {
        p = h(k, k - 1);
        r = h(k + 1, k - 1);
        w = (len == 3) ? h(k + 2, k - 1) : 0.0;
      }
      std::vector<double> x(len);
      x[0] = p;
      x[1] = r;
      if (len == 3) x[2] = w;
      HouseholderReflector refl = make_householder(x);
      if (refl.beta != 0.0) {
        const std::size_t c0 = (k == l) ? static_cast<std::size_t>(l)
                                        : static_cast<std::size_t>(k - 1);
        apply_householder_left(refl, h, k, c0, n, ctx);
        const std::size_t rend = std::min<std::size_t>(k + len + 1, m + 1);
        apply_householder_right(refl, h, k, 0, rend, ctx);
        apply_householder_right(refl, q, k, 0, n, ctx);
      }
      if (k > l) {
        h(k + 1, k - 1) = 0.0;
        if (len == 3) h(k + 2, k - 1) = 0.0;
      }
    }
  }

  // Standardize: split any 2x2 block whose eigenvalues are real, then
  // write exact zeros below the block diagonal.
  for (std::size_t i = 0; i + 1 < n;) {
    if (h(i + 1, i) != 0.0) {
      detail::split_real_block(h, q, i, ctx);
      i += (h(i + 1, i) != 0.0) ? 2 : 1;
    } else {
      ++i;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t i0 = j + 2;
    if (j + 1 < n && h(j + 1, j) != 0.0) i0 = j + 3;  // keep the 2x2 pair entry
    for (std::size_t i = i0; i < n; ++i) h(i, j) = 0.0;
  }
  // A nonzero subdiagonal entry may be followed by another (chained 2x2
  // markers); resolve greedily left to right so blocks do not overlap.
  for (std::size_t i = 0; i + 1 < n;) {
    if (h(i + 1, i) != 0.0) {
      if (i + 2 < n) h(i + 2, i + 1) = 0.0;
      i += 2;
    } else {
      ++i;
    }
  }

  RealSchurForm form{std::move(q), std::move(h), {}};
  form.blocks = detail::partition_blocks(form.R);
  return form;
}

inline std::pair<DenseMatrix, DenseMatrix> hessenberg_reduce(
    const DenseMatrix& a) {
  FlopCounter scratch;
  return hessenberg_reduce(a, scratch);
}

inline RealSchurForm real_schur(const DenseMatrix& a, FlopCounter& ctx) {
  if (!a.square()) throw ShapeError("real_schur: matrix must be square");
  auto [q, h] = hessenberg_reduce(a, ctx);
  return francis_qr(h, q, ctx);
}

inline RealSchurForm real_schur(const DenseMatrix& a) {
  FlopCounter scratch;
  return real_schur(a, scratch);
}

// Eigenvalues read off the diagonal blocks: a 1x1 block yields (r, 0), a
// 2x2 block the conjugate pair theta +- i*mu.
inline Spectrum spectrum_of(const RealSchurForm& form) {
  Spectrum sp;
  const DenseMatrix& r = form.R;
  for (const SchurBlock& b : form.blocks) {
    if (b.size == 1) {
      sp.eigenvalues.emplace_back(r(b.start, b.start), 0.0);
    } else {
      const std::size_t i = b.start;
      const double theta = 0.5 * (r(i, i) + r(i + 1, i + 1));
      const double half = 0.5 * (r(i, i) - r(i + 1, i + 1));
      const double inside = -half * half - r(i, i + 1) * r(i + 1, i);
      const double mu = std::sqrt(std::max(inside, 0.0));
      sp.eigenvalues.emplace_back(theta, mu);
      sp.eigenvalues.emplace_back(theta, -mu);
    }
  }
  return sp;
}

}  // namespace shsqrt
