#include "dsopt/cones.hpp"

#include <algorithm>
#include <cmath>

#include "dsopt/errors.hpp"
#include "dsopt/lp.hpp"
#include "dsopt/numerics.hpp"

namespace dsopt {

namespace {

constexpr double kZeroTol = 1e-12;
constexpr double kDupCosTol = 1.0 - 1e-9;

bool nearly_parallel(const Vec& a, const Vec& b) {
  // both unit vectors
  return dot(a, b) > kDupCosTol;
}

bool lex_less(const Vec& a, const Vec& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - 1e-14) return true;
    if (a[i] > b[i] + 1e-14) return false;
  }
  return false;
}

/// Rank of the projections of the rows in `tight` onto the complement of the
/// current lineality space.
int projected_rank(const std::vector<Vec>& rows, const std::vector<int>& tight,
                   const std::vector<Vec>& lineality) {
  std::vector<Vec> projected;
  projected.reserve(tight.size());
  for (int j : tight) {
    Vec p = rows[j];
    for (const auto& u : lineality) axpy(-dot(u, p), u, p);
    projected.push_back(std::move(p));
  }
  return numerical_rank(projected);
}

}  // namespace

ConeGenerators normal_cone_generators(const Vec& x, double alpha,
                                      const Polyhedron& omega) {
  const ActiveSet as = omega.nearly_active(x, alpha);
  ConeGenerators g;
  if (as.indices.empty()) {
    g.source = ConeSource::Empty;
    return g;
  }
  g.source = ConeSource::ActiveNormals;
  for (int i : as.indices) g.generators.push_back(omega.rows()[i]);
  return g;
}

ConeGenerators tangent_generators_fullrank(const Matrix& active_columns) {
  const int n = active_columns.rows;
  const int q = active_columns.cols;
  if (q > n)
    throw RankDeficient("tangent_generators_fullrank: more rows than dimension");
  ConeGenerators g;
  g.source = ConeSource::FullRankFormula;
  if (q > 0) {
    const Matrix pinv = pseudoinverse(active_columns);  // q x n
    for (int i = 0; i < q; ++i) {
      Vec d(n);
      for (int j = 0; j < n; ++j) d[j] = -pinv(i, j);
      g.generators.push_back(std::move(d));
    }
  }
  g.lineality = orthonormal_complement(active_columns);
  return g;
}

ConeGenerators tangent_generators_dd(const std::vector<Vec>& active_rows,
                                     int dimension) {
  const int n = dimension;
  std::vector<Vec> lineality;
  for (int j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    e[j] = 1.0;
    lineality.push_back(std::move(e));
  }
  std::vector<Vec> rays;

  for (size_t processed = 0; processed < active_rows.size(); ++processed) {
    const Vec& a = active_rows[processed];
    const double a_norm = norm2(a);
    if (a_norm <= kZeroTol) continue;

    // Lineality component of a.
    Vec w(n, 0.0);
    for (const auto& u : lineality) axpy(dot(u, a), u, w);
    const double w_norm = norm2(w);

    if (w_norm > 1e-10 * a_norm) {
      // The constraint cuts the lineality space: one direction leaves the
      // lineality and becomes a ray, the rest is rotated into a^perp.
      Vec u0 = scaled(w, 1.0 / w_norm);  // a^T u0 = w_norm > 0
      const double au0 = dot(a, u0);
      // Lineality and ray inputs are unit vectors, so anything tiny after
      // removing the u0 component is subtraction noise, not a direction.
      std::vector<Vec> new_lineality;
      for (const auto& u : lineality) {
        Vec v = u;
        axpy(-dot(a, u) / au0, u0, v);
        if (norm2(v) > 1e-9) new_lineality.push_back(std::move(v));
      }
      lineality = orthonormal_span_basis(new_lineality);
      std::vector<Vec> kept;
      for (auto& r : rays) {
        axpy(-dot(a, r) / au0, u0, r);
        const double rn = norm2(r);
        if (rn > 1e-9) {
          scale_in_place(r, 1.0 / rn);
          kept.push_back(std::move(r));
        }
      }
      rays = std::move(kept);
      Vec neg = scaled(u0, -1.0);
      bool dup = false;
      for (const auto& r : rays)
        if (nearly_parallel(r, neg)) {
          dup = true;
          break;
        }
      if (!dup) rays.push_back(std::move(neg));
      continue;
    }

    // a is orthogonal to the lineality space: split rays by sign.
    std::vector<int> plus, zero, minus;
    std::vector<double> vals(rays.size());
    for (size_t i = 0; i < rays.size(); ++i) {
      vals[i] = dot(a, rays[i]);
      if (vals[i] > 1e-10 * a_norm)
        plus.push_back(static_cast<int>(i));
      else if (vals[i] < -1e-10 * a_norm)
        minus.push_back(static_cast<int>(i));
      else
        zero.push_back(static_cast<int>(i));
    }
    if (plus.empty()) continue;  // constraint does not cut the current cone

    const int pointed_dim = n - static_cast<int>(lineality.size());
    std::vector<Vec> next;
    for (int i : zero) next.push_back(rays[i]);
    for (int i : minus) next.push_back(rays[i]);
    for (int ip : plus) {
      for (int im : minus) {
        // adjacency by rank of the common tight set
        std::vector<int> tight;
        for (size_t j = 0; j < processed; ++j) {
          const Vec& aj = active_rows[j];
          const double nj = norm2(aj);
          if (nj <= kZeroTol) continue;
          if (std::fabs(dot(aj, rays[ip])) <= 1e-9 * nj &&
              std::fabs(dot(aj, rays[im])) <= 1e-9 * nj)
            tight.push_back(static_cast<int>(j));
        }
        const bool adjacent =
            pointed_dim <= 2 ||
            projected_rank(active_rows, tight, lineality) >= pointed_dim - 2;
        if (!adjacent) continue;
        Vec comb = scaled(rays[im], vals[ip]);
        axpy(-vals[im], rays[ip], comb);
        const double cn = norm2(comb);
        if (cn <= kZeroTol) continue;
        scale_in_place(comb, 1.0 / cn);
        bool dup = false;
        for (const auto& r : next)
          if (nearly_parallel(r, comb)) {
            dup = true;
            break;
          }
        if (!dup) next.push_back(std::move(comb));
      }
    }
    rays = std::move(next);
  }

  ConeGenerators g;
  std::sort(rays.begin(), rays.end(), lex_less);
  g.generators = std::move(rays);
  g.lineality = std::move(lineality);
  g.source = g.trivial() ? ConeSource::Empty : ConeSource::DoubleDescription;
  return g;
}

bool cone_member(const Vec& y, const ConeGenerators& g) {
  if (g.trivial()) return norm2(y) <= 1e-9;
  std::vector<Vec> cols = g.generators;
  for (const auto& u : g.lineality) {
    cols.push_back(u);
    cols.push_back(scaled(u, -1.0));
  }
  for (const auto& c : cols)
    if (c.size() != y.size())
      throw DimensionMismatch("cone_member: dimension mismatch");
  // feasibility-only LP
  const LPResult r = min_l1_decomposition(cols, y);
  return r.status != LPStatus::Infeasible;
}

}  // namespace dsopt
