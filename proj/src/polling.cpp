#include "dsopt/polling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsopt/errors.hpp"
#include "dsopt/numerics.hpp"

namespace dsopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Final guard before a direction enters a set: ratio-test the step against
/// the whole polyhedron (multiplier cap 1) and drop it if it collapses.
/// A no-op whenever the construction already guarantees feasibility.
void push_direction(PollingSet& set, const Polyhedron& omega, Vec d,
                    Provenance prov, double scale) {
  const double len = norm2(d);
  if (len <= 1e-15) return;
  const double t = omega.max_feasible_scale(set.x, d, 1.0);
  if (t <= 1e-15) return;
  if (t < 1.0 - 1e-12) {
    scale_in_place(d, t);
    scale *= t;
  }
  set.directions.push_back({std::move(d), prov, scale});
}

Vec unit_axis(int n, int j) {
  Vec e(n, 0.0);
  e[j] = 1.0;
  return e;
}

/// Case 1: no nearly-active constraints; +/- coordinate steps of length alpha.
PollingSet coordinate_pss(const Vec& x, double alpha, const Polyhedron& omega) {
  const int n = omega.dimension();
  PollingSet set;
  set.x = x;
  set.alpha = alpha;
  set.construction_case = ConstructionCase::Unconstrained;
  for (int i = 0; i < n; ++i) {
    Vec minus = unit_axis(n, i);
    scale_in_place(minus, -alpha);
    push_direction(set, omega, std::move(minus), Provenance::Tangent, alpha);
    Vec plus = unit_axis(n, i);
    scale_in_place(plus, alpha);
    push_direction(set, omega, std::move(plus), Provenance::Tangent, alpha);
  }
  // Lambda = sqrt(n) holds when every coordinate step kept its full length.
  if (static_cast<int>(set.directions.size()) == 2 * n) {
    bool full = true;
    for (const auto& pd : set.directions)
      if (std::fabs(norm2(pd.d) - alpha) > 1e-12 * alpha) full = false;
    if (full) set.certified_lambda = std::sqrt(static_cast<double>(n));
  }
  set.degenerate = set.directions.empty();
  return set;
}

bool rows_linearly_independent(const std::vector<Vec>& rows, int n) {
  const int q = static_cast<int>(rows.size());
  if (q == 0) return true;
  if (q > n) return false;
  const Svd s = svd(Matrix::from_columns(rows));
  return is_full_column_rank(s);
}

struct TangentBlock {
  std::vector<PollDirection> dirs;   // tangent generators then lineality pairs
  ConeGenerators cone;               // the generating description used
  ConstructionCase source_case = ConstructionCase::FullRank;
};

/// Tangent-cone generators scaled to length alpha plus lineality pairs, in
/// the order shared by every strategy.
TangentBlock tangent_block(const Vec& x, double alpha, const Polyhedron& omega,
                           const ActiveSet& active) {
  TangentBlock block;
  std::vector<Vec> rows;
  for (int i : active.indices) rows.push_back(omega.rows()[i]);
  const int n = omega.dimension();
  if (rows_linearly_independent(rows, n)) {
    block.cone = tangent_generators_fullrank(Matrix::from_columns(rows));
    block.source_case = ConstructionCase::FullRank;
  } else {
    block.cone = tangent_generators_dd(rows, n);
    block.source_case = ConstructionCase::DoubleDesc;
  }
  PollingSet tmp;
  tmp.x = x;
  tmp.alpha = alpha;
  for (const auto& g : block.cone.generators) {
    const double gn = norm2(g);
    Vec d = scaled(g, alpha / gn);
    push_direction(tmp, omega, std::move(d), Provenance::Tangent, alpha / gn);
  }
  for (const auto& u : block.cone.lineality) {
    push_direction(tmp, omega, scaled(u, alpha), Provenance::Nullspace, alpha);
    push_direction(tmp, omega, scaled(u, -alpha), Provenance::Nullspace, alpha);
  }
  block.dirs = std::move(tmp.directions);
  return block;
}

/// Case 3(b): scaled outward normals of the nearly-active constraints.
void append_scaled_normals(PollingSet& set, const Polyhedron& omega,
                           const ActiveSet& active) {
  for (int i : active.indices) {
    const Vec& a = omega.rows()[i];
    const double an = std::sqrt(omega.row_norm2sq(i));
    const double t =
        std::min(omega.max_feasible_scale(set.x, a, kInf), set.alpha / an);
    if (t <= 1e-15) continue;
    push_direction(set, omega, scaled(a, t), Provenance::Normal, t);
  }
}

PollingSet practical_pss_impl(const Vec& x, double alpha,
                              const Polyhedron& omega, int depth);

/// Case 3(c): complete an unspanned subspace through x recursively.
void append_subspace_completion(PollingSet& set, const Polyhedron& omega,
                                const std::vector<Vec>& spanned, int depth) {
  const int n = omega.dimension();
  const std::vector<Vec> span_basis = orthonormal_span_basis(spanned);
  if (static_cast<int>(span_basis.size()) >= n) return;
  const std::vector<Vec> complement =
      orthonormal_complement(Matrix::from_columns(span_basis));
  const int k = static_cast<int>(complement.size());

  if (k == 1) {
    const Vec& u = complement.front();
    const double tp = omega.max_feasible_scale(set.x, u, set.alpha);
    if (tp > 1e-15)
      push_direction(set, omega, scaled(u, tp), Provenance::Nullspace, tp);
    Vec neg = scaled(u, -1.0);
    const double tm = omega.max_feasible_scale(set.x, neg, set.alpha);
    if (tm > 1e-15)
      push_direction(set, omega, scaled(neg, tm), Provenance::Nullspace, tm);
    return;
  }

  // Restrict Omega to the affine slice x + span(complement).
  const Vec s = omega.slacks(set.x);
  std::vector<Vec> sub_rows;
  Vec sub_rhs;
  for (int i = 0; i < omega.num_constraints(); ++i) {
    Vec r(k);
    for (int j = 0; j < k; ++j) r[j] = dot(omega.rows()[i], complement[j]);
    sub_rows.push_back(std::move(r));
    sub_rhs.push_back(std::max(s[i], 0.0));
  }
  const Polyhedron sub(k, std::move(sub_rows), std::move(sub_rhs));
  const PollingSet inner =
      practical_pss_impl(Vec(k, 0.0), set.alpha, sub, depth + 1);
  for (const auto& pd : inner.directions) {
    Vec lifted(n, 0.0);
    for (int j = 0; j < k; ++j) axpy(pd.d[j], complement[j], lifted);
    push_direction(set, omega, std::move(lifted), pd.provenance,
                   pd.scale_applied);
  }
}

PollingSet practical_pss_impl(const Vec& x, double alpha,
                              const Polyhedron& omega, int depth) {
  if (depth > omega.dimension() + 1)
    throw NumericalBreakdown("practical_pss: recursion depth exceeded");
  const ActiveSet active = omega.nearly_active(x, alpha);
  if (active.indices.empty()) return coordinate_pss(x, alpha, omega);

  std::vector<Vec> rows;
  for (int i : active.indices) rows.push_back(omega.rows()[i]);
  const int n = omega.dimension();
  if (rows_linearly_independent(rows, n)) {
    try {
      return fullrank_pss(x, alpha, omega, active);
    } catch (const RankDeficient&) {
      // borderline rank decision; fall through to the general construction
    }
  }

  const ConeGenerators cone = tangent_generators_dd(rows, n);
  PollingSet set;
  set.x = x;
  set.alpha = alpha;

  if (cone.trivial()) {
    set.construction_case = ConstructionCase::NormalGens;
    append_scaled_normals(set, omega, active);
    set.degenerate = set.directions.empty();
    return set;
  }

  set.construction_case = ConstructionCase::DoubleDesc;
  for (const auto& g : cone.generators) {
    const double gn = norm2(g);
    push_direction(set, omega, scaled(g, alpha / gn), Provenance::Tangent,
                   alpha / gn);
  }
  for (const auto& u : cone.lineality) {
    push_direction(set, omega, scaled(u, alpha), Provenance::Nullspace, alpha);
    push_direction(set, omega, scaled(u, -alpha), Provenance::Nullspace, alpha);
  }
  for (const auto& g : cone.generators) {
    Vec neg = scaled(g, -1.0);
    const double t = omega.max_feasible_scale(x, neg, alpha);
    if (t <= 1e-15) continue;
    push_direction(set, omega, scaled(neg, t), Provenance::NegativeTangent, t);
  }

  std::vector<Vec> spanned = cone.generators;
  for (const auto& u : cone.lineality) spanned.push_back(u);
  if (numerical_rank(spanned) < n) {
    set.construction_case = ConstructionCase::Recursive;
    append_subspace_completion(set, omega, spanned, depth);
  }
  set.degenerate = set.directions.empty();
  return set;
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Tangent: return "tangent";
    case Provenance::NegativeTangent: return "negative-tangent";
    case Provenance::Normal: return "normal";
    case Provenance::Nullspace: return "nullspace";
  }
  return "?";
}

const char* to_string(PollStrategy s) {
  switch (s) {
    case PollStrategy::TangentOnly: return "tangent";
    case PollStrategy::TangentPlusNormal: return "tangent+normal";
    case PollStrategy::FullLambdaPSS: return "full";
  }
  return "?";
}

const char* to_string(ConstructionCase c) {
  switch (c) {
    case ConstructionCase::Unconstrained: return "unconstrained";
    case ConstructionCase::BoundFormula: return "bound-formula";
    case ConstructionCase::FullRank: return "full-rank";
    case ConstructionCase::DoubleDesc: return "double-desc";
    case ConstructionCase::NormalGens: return "normal-gens";
    case ConstructionCase::Recursive: return "recursive";
  }
  return "?";
}

PollingSet bound_pss(const Vec& x, double alpha, const Polyhedron& omega) {
  const auto& bs = omega.bound_structure();
  if (!bs)
    throw DimensionMismatch("bound_pss: polyhedron has no bound structure");
  const int n = omega.dimension();
  if (static_cast<int>(x.size()) != n)
    throw DimensionMismatch("bound_pss: point dimension mismatch");

  PollingSet set;
  set.x = x;
  set.alpha = alpha;
  set.construction_case = ConstructionCase::BoundFormula;

  std::vector<PollDirection> tangent, shortened;
  for (int i = 0; i < n; ++i) {
    const double gap_down = bs->lower[i] > -kInf ? x[i] - bs->lower[i] : kInf;
    const double gap_up = bs->upper[i] < kInf ? bs->upper[i] - x[i] : kInf;
    const double a_minus = std::min(alpha, gap_down);
    const double a_plus = std::min(alpha, gap_up);
    if (a_minus > 0.0) {
      Vec d = unit_axis(n, i);
      scale_in_place(d, -a_minus);
      PollDirection pd{std::move(d),
                       a_minus == alpha ? Provenance::Tangent
                                        : Provenance::Normal,
                       a_minus};
      (a_minus == alpha ? tangent : shortened).push_back(std::move(pd));
    }
    if (a_plus > 0.0) {
      Vec d = unit_axis(n, i);
      scale_in_place(d, a_plus);
      PollDirection pd{std::move(d),
                       a_plus == alpha ? Provenance::Tangent
                                       : Provenance::Normal,
                       a_plus};
      (a_plus == alpha ? tangent : shortened).push_back(std::move(pd));
    }
  }
  set.directions = std::move(tangent);
  for (auto& pd : shortened) set.directions.push_back(std::move(pd));
  set.degenerate = set.directions.empty();

  // Certified bound: Lambda = min[n, sqrt(n) alpha / min{alpha, nonzero gaps}]
  double min_gap = alpha;
  for (int i = 0; i < n; ++i) {
    if (bs->lower[i] > -kInf && x[i] != bs->lower[i])
      min_gap = std::min(min_gap, x[i] - bs->lower[i]);
    if (bs->upper[i] < kInf && x[i] != bs->upper[i])
      min_gap = std::min(min_gap, bs->upper[i] - x[i]);
  }
  if (min_gap > 0.0)
    set.certified_lambda =
        std::min(static_cast<double>(n),
                 std::sqrt(static_cast<double>(n)) * alpha / min_gap);
  return set;
}

PollingSet fullrank_pss(const Vec& x, double alpha, const Polyhedron& omega,
                        const ActiveSet& active) {
  const int n = omega.dimension();
  const int q = static_cast<int>(active.indices.size());
  std::vector<Vec> rows;
  for (int i : active.indices) rows.push_back(omega.rows()[i]);
  if (q > n) throw RankDeficient("fullrank_pss: more active rows than dimension");
  const Matrix a = rows.empty() ? Matrix(n, 0) : Matrix::from_columns(rows);

  PollingSet set;
  set.x = x;
  set.alpha = alpha;
  set.construction_case = ConstructionCase::FullRank;

  std::vector<Vec> dhat(q);
  Vec dhat_norm(q);
  if (q > 0) {
    const Matrix pinv = pseudoinverse(a);  // throws RankDeficient
    for (int i = 0; i < q; ++i) {
      Vec d(n);
      for (int j = 0; j < n; ++j) d[j] = -pinv(i, j);
      dhat_norm[i] = norm2(d);
      dhat[i] = std::move(d);
    }
  }

  for (int i = 0; i < q; ++i)
    push_direction(set, omega, scaled(dhat[i], alpha / dhat_norm[i]),
                   Provenance::Tangent, alpha / dhat_norm[i]);

  const std::vector<Vec> complement = orthonormal_complement(a);
  for (const auto& u : complement) {
    push_direction(set, omega, scaled(u, alpha), Provenance::Nullspace, alpha);
    push_direction(set, omega, scaled(u, -alpha), Provenance::Nullspace, alpha);
  }

  const Vec s = omega.slacks(x);
  for (int i = 0; i < q; ++i) {
    const double ai =
        std::min(dhat_norm[i] * std::max(s[active.indices[i]], 0.0) / alpha, 1.0);
    if (ai <= 1e-15) continue;  // zero-scaled negatives dropped
    Vec d = scaled(dhat[i], -ai * alpha / dhat_norm[i]);
    push_direction(set, omega, std::move(d), Provenance::NegativeTangent, ai);
  }

  set.degenerate = set.directions.empty();
  if (q > 0)
    set.certified_lambda = q * condition_number(a) +
                           std::sqrt(static_cast<double>(n - q));
  else
    set.certified_lambda = std::sqrt(static_cast<double>(n));
  return set;
}

PollingSet practical_pss(const Vec& x, double alpha, const Polyhedron& omega) {
  return practical_pss_impl(x, alpha, omega, 0);
}

PollingSet strategy_pss(const Vec& x, double alpha, const Polyhedron& omega,
                        PollStrategy strategy) {
  if (strategy == PollStrategy::FullLambdaPSS) {
    PollingSet set = practical_pss(x, alpha, omega);
    set.strategy = strategy;
    return set;
  }

  const ActiveSet active = omega.nearly_active(x, alpha);
  if (active.indices.empty()) {
    PollingSet set = coordinate_pss(x, alpha, omega);
    set.strategy = strategy;
    return set;
  }

  TangentBlock block = tangent_block(x, alpha, omega, active);
  PollingSet set;
  set.x = x;
  set.alpha = alpha;
  set.strategy = strategy;
  set.construction_case = block.source_case;
  set.directions = std::move(block.dirs);

  if (set.directions.empty()) {
    // T = {0}: poll the scaled normal-cone generators instead.
    set.construction_case = ConstructionCase::NormalGens;
    append_scaled_normals(set, omega, active);
    set.degenerate = set.directions.empty();
    return set;
  }

  if (strategy == PollStrategy::TangentPlusNormal)
    append_scaled_normals(set, omega, active);
  set.degenerate = set.directions.empty();
  return set;
}

}  // namespace dsopt
