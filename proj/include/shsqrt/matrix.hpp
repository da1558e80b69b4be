#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "shsqrt/errors.hpp"

namespace shsqrt {

// Analytic flop account. Kernels increment these with their known
// operation counts; the counter never wraps scalar arithmetic.
struct FlopCounter {
  std::uint64_t adds = 0;
  std::uint64_t muls = 0;
  std::uint64_t divs = 0;
  std::uint64_t sqrts = 0;

  std::uint64_t total() const { return adds + muls + divs + sqrts; }

  FlopCounter& operator+=(const FlopCounter& other) {
    adds += other.adds;
    muls += other.muls;
    divs += other.divs;
    sqrts += other.sqrts;
    return *this;
  }
};

// Dense real matrix, row-major, value-semantic.
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw ShapeError("DenseMatrix: data length does not match shape");
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                    std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_)
      throw ShapeError("DenseMatrix::block out of range");
    DenseMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
      throw ShapeError("DenseMatrix::set_block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  DenseMatrix& operator+=(const DenseMatrix& other) {
    require_same_shape(other, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& other) {
    require_same_shape(other, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
  }
  DenseMatrix& operator*=(double c) {
    for (double& v : data_) v *= c;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, double c) { return a *= c; }
  friend DenseMatrix operator*(double c, DenseMatrix a) { return a *= c; }

 private:
  void require_same_shape(const DenseMatrix& other, const char* op) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
      throw ShapeError(std::string("DenseMatrix: shape mismatch in ") + op);
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

inline void require_finite(const DenseMatrix& m, const std::string& what) {
  if (!m.all_finite())
    throw StructureError(what + ": matrix has non-finite entries");
}

// Exact triple-loop product; ctx incremented by m*k*n muls and adds each.
inline DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b,
                           FlopCounter& ctx) {
  if (a.cols() != b.rows()) throw ShapeError("mat_mul: inner dimension mismatch");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a(i, p);
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aip * b(p, j);
    }
  ctx.muls += static_cast<std::uint64_t>(m) * k * n;
  ctx.adds += static_cast<std::uint64_t>(m) * k * n;
  return c;
}

inline DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b) {
  FlopCounter scratch;
  return mat_mul(a, b, scratch);
}

inline double frobenius_norm(const DenseMatrix& m) {
  // Two-pass scaling keeps the sum of squares from overflowing.
  double maxabs = 0.0;
  for (double v : m.data()) maxabs = std::max(maxabs, std::fabs(v));
  if (maxabs == 0.0) return 0.0;
  double s = 0.0;
  for (double v : m.data()) {
    const double t = v / maxabs;
    s += t * t;
  }
  return maxabs * std::sqrt(s);
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("max_abs_diff: shape mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    d = std::max(d, std::fabs(a.data()[k] - b.data()[k]));
  return d;
}

}  // namespace shsqrt
