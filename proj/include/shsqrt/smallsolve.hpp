#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "shsqrt/errors.hpp"
#include "shsqrt/matrix.hpp"

namespace shsqrt {

// Gaussian elimination with complete pivoting. Throws SylvesterSingularError
// when a pivot falls below tol * (largest initial pivot).
inline std::vector<double> solve_complete_pivoting(DenseMatrix a,
                                                   std::vector<double> b,
                                                   FlopCounter& ctx,
                                                   double tol = 1e-13) {
  if (!a.square() || a.rows() != b.size())
    throw ShapeError("solve_complete_pivoting: shape mismatch");
  const std::size_t n = a.rows();
  std::vector<std::size_t> colperm(n);
  std::iota(colperm.begin(), colperm.end(), 0);

  double pivot0 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pi = k, pj = k;
    double pmax = 0.0;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (std::fabs(a(i, j)) > pmax) {
          pmax = std::fabs(a(i, j));
          pi = i;
          pj = j;
        }
    if (k == 0) pivot0 = pmax;
    if (pmax <= tol * std::max(pivot0, 1e-300))
      throw SylvesterSingularError(
          "solve_complete_pivoting: pivot below tolerance");
    if (pi != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pi, j));
      std::swap(b[k], b[pi]);
    }
    if (pj != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, pj));
      std::swap(colperm[k], colperm[pj]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = a(i, k) / a(k, k);
      a(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
      b[i] -= l * b[k];
    }
  }
  std::vector<double> y(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * y[j];
    y[k] = s / a(k, k);
  }
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[colperm[k]] = y[k];
  // Analytic count for GE + back substitution on an n x n system.
  const std::uint64_t nn = n;
  ctx.muls += nn * nn * nn / 3 + nn * nn;
  ctx.adds += nn * nn * nn / 3 + nn * nn;
  ctx.divs += nn * (nn + 1) / 2;
  return x;
}

// Thin SVD of a (possibly rectangular, rows >= cols after implicit
// augmentation) matrix by one-sided Jacobi; adequate for the small systems
// that appear in the block recursions (order <= 16).
struct JacobiSvd {
  DenseMatrix u;               // m x n, columns orthonormal where sigma > 0
  DenseMatrix v;               // n x n orthogonal
  std::vector<double> sigma;   // n singular values, unsorted
};

inline JacobiSvd jacobi_svd(const DenseMatrix& a0) {
  const std::size_t m = a0.rows(), n = a0.cols();
  DenseMatrix a = a0;
  DenseMatrix v = DenseMatrix::identity(n);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          app += a(i, p) * a(i, p);
          aqq += a(i, q) * a(i, q);
          apq += a(i, p) * a(i, q);
        }
        if (std::fabs(apq) <= 10.0 * eps * std::sqrt(app * aqq) || apq == 0.0)
          continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0)
                             ? 1.0 / (zeta + std::sqrt(1.0 + zeta * zeta))
                             : 1.0 / (zeta - std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = a(i, p), y = a(i, q);
          a(i, p) = c * x - s * y;
          a(i, q) = s * x + c * y;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double x = v(i, p), y = v(i, q);
          v(i, p) = c * x - s * y;
          v(i, q) = s * x + c * y;
        }
      }
    if (!rotated) break;
  }
  JacobiSvd out;
  out.sigma.resize(n);
  out.u = a;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += a(i, j) * a(i, j);
    s = std::sqrt(s);
    out.sigma[j] = s;
    if (s > 0.0)
      for (std::size_t i = 0; i < m; ++i) out.u(i, j) /= s;
  }
  out.v = std::move(v);
  return out;
}

// Minimal-norm least-squares solution via the Jacobi SVD; singular values
// below rank_tol * sigma_max are treated as zero.
inline std::vector<double> solve_min_norm(const DenseMatrix& a,
                                          const std::vector<double>& b,
                                          FlopCounter& ctx,
                                          double rank_tol = 1e-10) {
  if (a.rows() != b.size()) throw ShapeError("solve_min_norm: shape mismatch");
  const std::size_t m = a.rows(), n = a.cols();
  const JacobiSvd svd = jacobi_svd(a);
  double smax = 0.0;
  for (double s : svd.sigma) smax = std::max(smax, s);
  std::vector<double> x(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (svd.sigma[j] <= rank_tol * smax || svd.sigma[j] == 0.0) continue;
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i) c += svd.u(i, j) * b[i];
    c /= svd.sigma[j];
    for (std::size_t i = 0; i < n; ++i) x[i] += c * svd.v(i, j);
  }
  // Rough analytic count: SVD sweeps plus the projection.
  const std::uint64_t mm = m, nn = n;
  ctx.muls += 8 * mm * nn * nn + 2 * mm * nn;
  ctx.adds += 8 * mm * nn * nn + 2 * mm * nn;
  ctx.divs += nn;
  ctx.sqrts += nn;
  return x;
}

inline std::vector<double> solve_complete_pivoting(DenseMatrix a,
                                                   std::vector<double> b,
                                                   double tol = 1e-13) {
  FlopCounter scratch;
  return solve_complete_pivoting(std::move(a), std::move(b), scratch, tol);
}

inline std::vector<double> solve_min_norm(const DenseMatrix& a,
                                          const std::vector<double>& b,
                                          double rank_tol = 1e-10) {
  FlopCounter scratch;
  return solve_min_norm(a, b, scratch, rank_tol);
}

}  // namespace shsqrt
