#include "dsopt/polyhedron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsopt/errors.hpp"

namespace dsopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Polyhedron::Polyhedron(int dimension, std::vector<Vec> rows, Vec rhs)
    : n_(dimension) {
  if (rows.size() != rhs.size())
    throw DimensionMismatch("Polyhedron: rows/rhs length mismatch");
  for (size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != n_)
      throw DimensionMismatch("Polyhedron: row dimension mismatch");
    if (!std::isfinite(rhs[i]))
      throw DimensionMismatch("Polyhedron: non-finite rhs");
    double nsq = 0.0;
    for (double v : rows[i]) {
      if (!std::isfinite(v)) throw DimensionMismatch("Polyhedron: non-finite row");
      nsq += v * v;
    }
    if (nsq == 0.0) {
      if (rhs[i] < 0.0)
        throw EmptyDomain("Polyhedron: row 0^T x <= b with b < 0");
      continue;  // trivial row dropped
    }
    rows_.push_back(std::move(rows[i]));
    rhs_.push_back(rhs[i]);
    row_norm2sq_.push_back(nsq);
  }

  // Detect the pure-bound case: every row has exactly one nonzero entry.
  // An unconstrained polyhedron is the all-infinite box.
  bool all_bounds = true;
  for (const auto& r : rows_) {
    int nz = 0;
    for (double v : r)
      if (v != 0.0) ++nz;
    if (nz != 1) {
      all_bounds = false;
      break;
    }
  }
  if (all_bounds) {
    BoundStructure bs;
    bs.lower.assign(n_, -kInf);
    bs.upper.assign(n_, kInf);
    for (size_t i = 0; i < rows_.size(); ++i) {
      int j = 0;
      while (rows_[i][j] == 0.0) ++j;
      const double c = rows_[i][j];
      const double bound = rhs_[i] / c;
      if (c > 0.0)
        bs.upper[j] = std::min(bs.upper[j], bound);
      else
        bs.lower[j] = std::max(bs.lower[j], bound);
    }
    bounds_ = std::move(bs);
  }
}

Polyhedron Polyhedron::unconstrained(int dimension) {
  return Polyhedron(dimension, {}, {});
}

Polyhedron Polyhedron::box(const Vec& lower, const Vec& upper) {
  if (lower.size() != upper.size())
    throw DimensionMismatch("Polyhedron::box: bound length mismatch");
  const int n = static_cast<int>(lower.size());
  std::vector<Vec> rows;
  Vec rhs;
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lower[j])) {
      Vec r(n, 0.0);
      r[j] = -1.0;
      rows.push_back(std::move(r));
      rhs.push_back(-lower[j]);
    }
    if (std::isfinite(upper[j])) {
      Vec r(n, 0.0);
      r[j] = 1.0;
      rows.push_back(std::move(r));
      rhs.push_back(upper[j]);
    }
  }
  return Polyhedron(n, std::move(rows), std::move(rhs));
}

void Polyhedron::check_dim(const Vec& x, const char* who) const {
  if (static_cast<int>(x.size()) != n_)
    throw DimensionMismatch(std::string(who) + ": point dimension mismatch");
}

bool Polyhedron::is_feasible(const Vec& x, double tol) const {
  check_dim(x, "is_feasible");
  for (size_t i = 0; i < rows_.size(); ++i) {
    const double t =
        tol >= 0.0 ? tol : 1e-12 * std::max(1.0, std::fabs(rhs_[i]));
    if (dot(rows_[i], x) > rhs_[i] + t) return false;
  }
  return true;
}

Vec Polyhedron::slacks(const Vec& x) const {
  check_dim(x, "slacks");
  Vec s(rows_.size());
  for (size_t i = 0; i < rows_.size(); ++i) s[i] = rhs_[i] - dot(rows_[i], x);
  return s;
}

ActiveSet Polyhedron::nearly_active(const Vec& x, double alpha) const {
  check_dim(x, "nearly_active");
  ActiveSet as;
  as.x = x;
  as.alpha = alpha;
  for (size_t i = 0; i < rows_.size(); ++i)
    if (rhs_[i] - alpha * row_norm2sq_[i] <= dot(rows_[i], x))
      as.indices.push_back(static_cast<int>(i));
  return as;
}

double Polyhedron::max_feasible_scale(const Vec& x, const Vec& u,
                                      double cap) const {
  check_dim(x, "max_feasible_scale");
  check_dim(u, "max_feasible_scale");
  double t = cap;
  for (size_t i = 0; i < rows_.size(); ++i) {
    const double du = dot(rows_[i], u);
    if (du > 0.0) {
      const double s = rhs_[i] - dot(rows_[i], x);
      t = std::min(t, s / du);
    }
  }
  return std::max(t, 0.0);
}

Vec Polyhedron::project(const Vec& z, double tol, int max_iter) const {
  check_dim(z, "project");
  if (rows_.empty()) return z;
  if (bounds_) {
    Vec p = z;
    for (int j = 0; j < n_; ++j)
      p[j] = std::min(std::max(p[j], bounds_->lower[j]), bounds_->upper[j]);
    return p;
  }

  // Dykstra over halfspaces.
  const int m = num_constraints();
  Vec y = z;
  std::vector<Vec> corrections(m, Vec(n_, 0.0));
  for (int it = 0; it < max_iter; ++it) {
    double max_change = 0.0;
    for (int i = 0; i < m; ++i) {
      Vec w = y;
      axpy(1.0, corrections[i], w);
      const double viol = dot(rows_[i], w) - rhs_[i];
      Vec y_new = w;
      if (viol > 0.0) axpy(-viol / row_norm2sq_[i], rows_[i], y_new);
      // correction = pre-projection point minus projected point
      Vec c = sub(w, y_new);
      max_change = std::max(max_change, norm_inf(sub(y_new, y)));
      corrections[i] = std::move(c);
      y = std::move(y_new);
    }
    if (max_change <= tol && is_feasible(y, 10.0 * tol)) return y;
  }
  throw NoConvergence("project: Dykstra did not converge", norm2(sub(y, z)));
}

}  // namespace dsopt
