#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "shsqrt/matrix.hpp"

namespace shsqrt {

// Plane rotation acting on rows (or columns) i and j.
struct GivensRotation {
  double c = 1.0;
  double s = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

// Reflector I - beta*v*v^T. beta == 0 encodes the identity.
struct HouseholderReflector {
  std::vector<double> v;
  double beta = 0.0;
};

// Overflow-safe rotation with c*a + s*b = r and -s*a + c*b = 0.
inline GivensRotation make_givens(double a, double b) {
  GivensRotation g;
  if (b == 0.0) {
    g.c = 1.0;
    g.s = 0.0;
  } else if (std::fabs(b) > std::fabs(a)) {
    const double t = a / b;
    g.s = 1.0 / std::sqrt(1.0 + t * t);
    g.c = g.s * t;
  } else {
    const double t = b / a;
    g.c = 1.0 / std::sqrt(1.0 + t * t);
    g.s = g.c * t;
  }
  return g;
}

// Reflector mapping x to -sign(x0)*||x||*e1 (sign chosen to avoid
// cancellation). Zero x or x already a multiple of e1 gives beta = 0.
inline HouseholderReflector make_householder(const std::vector<double>& x) {
  HouseholderReflector h;
  h.v = x;
  if (x.empty()) return h;
  double scale = 0.0;
  for (double t : x) scale = std::max(scale, std::fabs(t));
  if (scale == 0.0) {
    h.beta = 0.0;
    return h;
  }
  double sigma = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double t = x[k] / scale;
    sigma += t * t;
  }
  const double x0 = x[0] / scale;
  if (sigma == 0.0) {
    h.beta = 0.0;  // already +-||x||*e1
    return h;
  }
  const double mu = std::sqrt(x0 * x0 + sigma);
  double v0 = (x0 <= 0.0) ? x0 - mu : -sigma / (x0 + mu);
  h.beta = 2.0 * v0 * v0 / (sigma + v0 * v0);
  h.v[0] = 1.0;
  for (std::size_t k = 1; k < x.size(); ++k) h.v[k] = x[k] / (scale * v0);
  return h;
}

// Applies (I - beta v v^T) to rows r0..r0+len-1, columns [c0, c1) of m.
inline void apply_householder_left(const HouseholderReflector& h, DenseMatrix& m,
                                   std::size_t r0, std::size_t c0, std::size_t c1,
                                   FlopCounter& ctx) {
  if (h.beta == 0.0) return;
  const std::size_t len = h.v.size();
  for (std::size_t j = c0; j < c1; ++j) {
    double w = 0.0;
    for (std::size_t k = 0; k < len; ++k) w += h.v[k] * m(r0 + k, j);
    w *= h.beta;
    for (std::size_t k = 0; k < len; ++k) m(r0 + k, j) -= h.v[k] * w;
  }
  const std::uint64_t ncols = c1 - c0;
  ctx.muls += (2 * len + 1) * ncols;
  ctx.adds += (2 * len - 1) * ncols;
}

// Applies (I - beta v v^T) to columns c0..c0+len-1, rows [r0, r1) of m.
inline void apply_householder_right(const HouseholderReflector& h, DenseMatrix& m,
                                    std::size_t c0, std::size_t r0, std::size_t r1,
                                    FlopCounter& ctx) {
  if (h.beta == 0.0) return;
  const std::size_t len = h.v.size();
  for (std::size_t i = r0; i < r1; ++i) {
    double w = 0.0;
    for (std::size_t k = 0; k < len; ++k) w += m(i, c0 + k) * h.v[k];
    w *= h.beta;
    for (std::size_t k = 0; k < len; ++k) m(i, c0 + k) -= w * h.v[k];
  }
  const std::uint64_t nrows = r1 - r0;
  ctx.muls += (2 * len + 1) * nrows;
  ctx.adds += (2 * len - 1) * nrows;
}

// Row update: rows g.i and g.j over columns [c0, c1).
inline void apply_givens_left(const GivensRotation& g, DenseMatrix& m,
                              std::size_t c0, std::size_t c1, FlopCounter& ctx) {
  for (std::size_t k = c0; k < c1; ++k) {
    const double x = m(g.i, k);
    const double y = m(g.j, k);
    m(g.i, k) = g.c * x + g.s * y;
    m(g.j, k) = -g.s * x + g.c * y;
  }
  ctx.muls += 4 * (c1 - c0);
  ctx.adds += 2 * (c1 - c0);
}

// Column update: columns g.i and g.j over rows [r0, r1).
inline void apply_givens_right(const GivensRotation& g, DenseMatrix& m,
                               std::size_t r0, std::size_t r1, FlopCounter& ctx) {
  for (std::size_t k = r0; k < r1; ++k) {
    const double x = m(k, g.i);
    const double y = m(k, g.j);
    m(k, g.i) = g.c * x + g.s * y;
    m(k, g.j) = -g.s * x + g.c * y;
  }
  ctx.muls += 4 * (r1 - r0);
  ctx.adds += 2 * (r1 - r0);
}

// Dense matrix form of a reflector, mostly for tests.
inline DenseMatrix householder_matrix(const HouseholderReflector& h) {
  const std::size_t n = h.v.size();
  DenseMatrix m = DenseMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) -= h.beta * h.v[i] * h.v[j];
  return m;
}

}  // namespace shsqrt
