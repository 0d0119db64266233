#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "dsopt/errors.hpp"
#include "dsopt/kernels.hpp"

namespace dsopt {

using Vec = std::vector<double>;

/// Dense row-major matrix. Sizes here are tiny (n <= ~60), so everything is
/// stored and manipulated densely.
struct Matrix {
  int rows = 0;
  int cols = 0;
  Vec a;  // rows*cols entries, row-major

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const {
    return a[static_cast<size_t>(i) * cols + j];
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Matrix with the given columns.
  static Matrix from_columns(const std::vector<Vec>& cols_in) {
    if (cols_in.empty()) return Matrix(0, 0);
    Matrix m(static_cast<int>(cols_in.front().size()),
             static_cast<int>(cols_in.size()));
    for (int j = 0; j < m.cols; ++j) {
      if (static_cast<int>(cols_in[j].size()) != m.rows)
        throw DimensionMismatch("from_columns: ragged column lengths");
      for (int i = 0; i < m.rows; ++i) m(i, j) = cols_in[j][i];
    }
    return m;
  }

  Vec column(int j) const {
    Vec c(rows);
    for (int i = 0; i < rows; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transposed() const {
    Matrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool all_finite() const {
    for (double v : a)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

inline double dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw DimensionMismatch("dot: size mismatch");
  return kernels::active().dot(x.data(), y.data(), x.size());
}

inline double norm2sq(const Vec& x) {
  return kernels::active().nrm2sq(x.data(), x.size());
}

inline double norm2(const Vec& x) { return std::sqrt(norm2sq(x)); }

inline double norm_inf(const Vec& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

inline void axpy(double a, const Vec& x, Vec& y) {
  if (x.size() != y.size()) throw DimensionMismatch("axpy: size mismatch");
  kernels::active().axpy(a, x.data(), y.data(), x.size());
}

inline void scale_in_place(Vec& x, double a) {
  kernels::active().scal(a, x.data(), x.size());
}

inline Vec scaled(const Vec& x, double a) {
  Vec y = x;
  scale_in_place(y, a);
  return y;
}

inline Vec add(const Vec& x, const Vec& y) {
  Vec z = x;
  axpy(1.0, y, z);
  return z;
}

inline Vec sub(const Vec& x, const Vec& y) {
  Vec z = x;
  axpy(-1.0, y, z);
  return z;
}

/// y = M x
inline Vec matvec(const Matrix& m, const Vec& x) {
  if (static_cast<int>(x.size()) != m.cols)
    throw DimensionMismatch("matvec: size mismatch");
  Vec y(m.rows);
  for (int i = 0; i < m.rows; ++i)
    y[i] = kernels::active().dot(m.a.data() + static_cast<size_t>(i) * m.cols,
                                 x.data(), x.size());
  return y;
}

/// y = M^T x
inline Vec matvec_t(const Matrix& m, const Vec& x) {
  if (static_cast<int>(x.size()) != m.rows)
    throw DimensionMismatch("matvec_t: size mismatch");
  Vec y(m.cols, 0.0);
  for (int i = 0; i < m.rows; ++i)
    kernels::active().axpy(x[i], m.a.data() + static_cast<size_t>(i) * m.cols,
                           y.data(), y.size());
  return y;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw DimensionMismatch("matmul: size mismatch");
  Matrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      kernels::active().axpy(aik, b.a.data() + static_cast<size_t>(k) * b.cols,
                             c.a.data() + static_cast<size_t>(i) * c.cols,
                             b.cols);
    }
  return c;
}

inline double max_abs_entry(const Matrix& m) {
  double v = 0.0;
  for (double e : m.a) v = std::max(v, std::fabs(e));
  return v;
}

}  // namespace dsopt
