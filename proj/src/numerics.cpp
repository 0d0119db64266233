#include "dsopt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dsopt/errors.hpp"
#include "dsopt/kernels.hpp"

namespace dsopt {

namespace {

constexpr double kRelRankTol = 1e-10;
constexpr double kAbsRankTol = 1e-14;

void check_input(const Matrix& a, const char* who) {
  if (!a.all_finite()) throw DimensionMismatch(std::string(who) + ": non-finite entries");
}

}  // namespace

Svd svd(const Matrix& a) {
  check_input(a, "svd");
  const int n = a.rows;
  const int q = a.cols;
  if (q > n) throw DimensionMismatch("svd: expects rows >= cols");

  // Work on the transposed copy so each column of A is a contiguous row.
  Matrix w = a.transposed();  // q x n, row i = column i of A
  Matrix v = Matrix::identity(q);
  const auto& k = kernels::active();

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < q - 1; ++p) {
      for (int r = p + 1; r < q; ++r) {
        double* wp = w.a.data() + static_cast<size_t>(p) * n;
        double* wr = w.a.data() + static_cast<size_t>(r) * n;
        const double app = k.nrm2sq(wp, n);
        const double arr = k.nrm2sq(wr, n);
        const double apr = k.dot(wp, wr, n);
        if (std::fabs(apr) <= 1e-15 * std::sqrt(app * arr) || apr == 0.0)
          continue;
        rotated = true;
        // rot() maps (x,y) -> (c*x + s*y, -s*x + c*y); zeroing the coupling
        // term under that convention needs tau = (app - arr) / (2 apr)
        const double tau = (app - arr) / (2.0 * apr);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        k.rot(wp, wr, c, s, n);
        k.rot(v.a.data() + static_cast<size_t>(p) * q,
              v.a.data() + static_cast<size_t>(r) * q, c, s, q);
      }
    }
    if (!rotated) break;
  }

  // Columns of W^T are now orthogonal; norms are the singular values.
  Svd out;
  out.sigma.resize(q);
  std::vector<int> order(q);
  std::iota(order.begin(), order.end(), 0);
  Vec norms(q);
  for (int i = 0; i < q; ++i)
    norms[i] = std::sqrt(k.nrm2sq(w.a.data() + static_cast<size_t>(i) * n, n));
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return norms[i] > norms[j]; });

  out.u = Matrix(n, q);
  out.v = Matrix(q, q);
  for (int jj = 0; jj < q; ++jj) {
    const int src = order[jj];
    out.sigma[jj] = norms[src];
    if (norms[src] > 0.0) {
      const double inv = 1.0 / norms[src];
      for (int i = 0; i < n; ++i) out.u(i, jj) = w(src, i) * inv;
    }
    // v accumulated rotations row-wise (v rows follow w rows)
    for (int i = 0; i < q; ++i) out.v(i, jj) = v(src, i);
  }
  return out;
}

bool is_full_column_rank(const Svd& s) {
  if (s.sigma.empty()) return true;
  const double smax = s.sigma.front();
  const double smin = s.sigma.back();
  if (smax == 0.0) return false;
  return smin > std::max(kRelRankTol * smax, kAbsRankTol);
}

Matrix pseudoinverse(const Matrix& a) {
  const Svd s = svd(a);
  if (!is_full_column_rank(s))
    throw RankDeficient("pseudoinverse: matrix is rank-deficient");
  // A^+ = V diag(1/sigma) U^T, q x n
  const int q = a.cols;
  const int n = a.rows;
  Matrix pinv(q, n);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int r = 0; r < q; ++r) acc += s.v(i, r) * s.u(j, r) / s.sigma[r];
      pinv(i, j) = acc;
    }
  return pinv;
}

std::vector<Vec> orthonormal_span_basis(const std::vector<Vec>& vs) {
  std::vector<Vec> basis;
  if (vs.empty()) return basis;
  double max_norm = 0.0;
  for (const auto& v : vs) max_norm = std::max(max_norm, norm2(v));
  if (max_norm == 0.0) return basis;
  const double tol = 1e-12 * max_norm;
  for (const auto& v : vs) {
    Vec r = v;
    // modified Gram-Schmidt, twice for accuracy
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) axpy(-dot(b, r), b, r);
    const double rn = norm2(r);
    if (rn > tol) {
      scale_in_place(r, 1.0 / rn);
      basis.push_back(std::move(r));
    }
  }
  return basis;
}

int numerical_rank(const std::vector<Vec>& vs) {
  return static_cast<int>(orthonormal_span_basis(vs).size());
}

std::vector<Vec> orthonormal_complement(const Matrix& a) {
  const int n = a.rows;
  const int q = a.cols;
  const Svd s = svd(a);
  if (!is_full_column_rank(s))
    throw RankDeficient("orthonormal_complement: matrix is rank-deficient");
  if (q == n) return {};

  // Extend the orthonormal column basis of A (the U columns) with coordinate
  // vectors, re-orthogonalizing twice.
  std::vector<Vec> basis;
  basis.reserve(n);
  for (int j = 0; j < q; ++j) basis.push_back(s.u.column(j));
  std::vector<Vec> complement;
  complement.reserve(n - q);
  for (int cand = 0; cand < n && static_cast<int>(complement.size()) < n - q;
       ++cand) {
    Vec r(n, 0.0);
    r[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) axpy(-dot(b, r), b, r);
      for (const auto& b : complement) axpy(-dot(b, r), b, r);
    }
    const double rn = norm2(r);
    if (rn > 1e-8) {
      scale_in_place(r, 1.0 / rn);
      complement.push_back(std::move(r));
    }
  }
  if (static_cast<int>(complement.size()) != n - q)
    throw NumericalBreakdown("orthonormal_complement: basis completion failed");
  return complement;
}

double condition_number(const Matrix& a) {
  const Svd s = svd(a);
  if (!is_full_column_rank(s))
    throw RankDeficient("condition_number: matrix is rank-deficient");
  return s.sigma.front() / s.sigma.back();
}

Lu lu_factor(const Matrix& a, double pivot_tol) {
  if (a.rows != a.cols) throw DimensionMismatch("lu_factor: square matrix required");
  const int n = a.rows;
  Lu f;
  f.lu = a;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), 0);
  double scale = max_abs_entry(a);
  if (scale == 0.0) scale = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::fabs(f.lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(f.lu(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best <= pivot_tol * scale) {
      f.singular = true;
      return f;
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
    }
    const double inv = 1.0 / f.lu(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double m = f.lu(i, k) * inv;
      f.lu(i, k) = m;
      if (m != 0.0)
        kernels::active().axpy(
            -m, f.lu.a.data() + static_cast<size_t>(k) * n + k + 1,
            f.lu.a.data() + static_cast<size_t>(i) * n + k + 1, n - k - 1);
    }
  }
  return f;
}

Vec lu_solve(const Lu& f, const Vec& b) {
  if (f.singular) throw NumericalBreakdown("lu_solve: singular factorization");
  const int n = f.lu.rows;
  if (static_cast<int>(b.size()) != n)
    throw DimensionMismatch("lu_solve: size mismatch");
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (int i = 1; i < n; ++i) {
    double acc = x[i];
    for (int j = 0; j < i; ++j) acc -= f.lu(i, j) * x[j];
    x[i] = acc;
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = x[i];
    for (int j = i + 1; j < n; ++j) acc -= f.lu(i, j) * x[j];
    x[i] = acc / f.lu(i, i);
  }
  return x;
}

Vec lu_solve_transposed(const Lu& f, const Vec& b) {
  if (f.singular)
    throw NumericalBreakdown("lu_solve_transposed: singular factorization");
  const int n = f.lu.rows;
  if (static_cast<int>(b.size()) != n)
    throw DimensionMismatch("lu_solve_transposed: size mismatch");
  // Solve (PA)^T z = b, i.e. U^T y = b then L^T z = y, then x = P^T z.
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    double acc = b[i];
    for (int j = 0; j < i; ++j) acc -= f.lu(j, i) * y[j];
    y[i] = acc / f.lu(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = y[i];
    for (int j = i + 1; j < n; ++j) acc -= f.lu(j, i) * y[j];
    y[i] = acc;
  }
  Vec x(n);
  for (int i = 0; i < n; ++i) x[f.perm[i]] = y[i];
  return x;
}

}  // namespace dsopt
