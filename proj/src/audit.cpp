#include "dsopt/audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dsopt/errors.hpp"
#include "dsopt/kernels.hpp"
#include "dsopt/lp.hpp"
#include "dsopt/numerics.hpp"

namespace dsopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double halton(long index, int base) {
  double f = 1.0;
  double r = 0.0;
  long i = index;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

int nth_prime(int k) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                               31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  return primes[k % 20];
}

/// Acklam's rational approximation of the inverse standard normal CDF
/// (|relative error| < 1.15e-9), used to map low-discrepancy points onto the
/// sphere.
double inverse_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p <= 0.0) return -kInf;
  if (p >= 1.0) return kInf;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

Vec quasi_random_unit(long index, int n) {
  Vec v(n);
  double nsq = 0.0;
  for (int j = 0; j < n; ++j) {
    const double u = halton(index + 1, nth_prime(j));
    v[j] = inverse_normal_cdf(std::min(std::max(u, 1e-12), 1.0 - 1e-12));
    nsq += v[j] * v[j];
  }
  if (nsq == 0.0) {
    v[0] = 1.0;
    return v;
  }
  scale_in_place(v, 1.0 / std::sqrt(nsq));
  return v;
}

// ---------------------------------------------------------------------------
// Lambda estimation
// ---------------------------------------------------------------------------

struct InnerOracle {
  std::vector<Vec> directions;
  const Polyhedron* omega = nullptr;
  Vec x;
  double alpha = 0.0;
  long lp_calls = 0;
  bool found_gap = false;  // some feasible v with no decomposition
  Vec gap_witness;

  /// x + v must be feasible exactly and ||v|| <= alpha (tiny slack for
  /// roundoff); returns -inf for points outside the admissible region and
  /// +inf for admissible points outside the cone of D.
  double operator()(const Vec& v) {
    if (norm2(v) > alpha * (1.0 + 1e-12)) return -kInf;
    Vec point = add(x, v);
    if (!omega->is_feasible(point, 0.0)) return -kInf;
    ++lp_calls;
    const LPResult r = min_l1_decomposition(directions, v);
    if (r.status == LPStatus::Infeasible) {
      if (!found_gap) {
        found_gap = true;
        gap_witness = v;
      }
      return kInf;
    }
    return r.value;
  }
};

struct Box {
  Vec lo, hi;
};

/// Coordinate-wise bounding box of {v : A v <= s, |v_j| <= alpha}, by 2n LPs
/// in shifted standard form.
Box feasible_bounding_box(const Polyhedron& omega, const Vec& x, double alpha) {
  const int n = omega.dimension();
  Box box;
  box.lo.assign(n, -alpha);
  box.hi.assign(n, alpha);
  const int m = omega.num_constraints();
  if (m == 0) return box;

  const Vec s = omega.slacks(x);
  // variables w = v + alpha*1 in [0, 2 alpha]; rows: A w + sA = s + alpha*A*1,
  // w_j + sB_j = 2 alpha
  const int p = n + m + n;
  Matrix e(m + n, p);
  Vec rhs(m + n);
  for (int i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      e(i, j) = omega.rows()[i][j];
      row_sum += omega.rows()[i][j];
    }
    e(i, n + i) = 1.0;
    rhs[i] = std::max(s[i], 0.0) + alpha * row_sum;
    if (rhs[i] < 0.0) rhs[i] = 0.0;  // box corner cannot reach this row anyway
  }
  for (int j = 0; j < n; ++j) {
    e(m + j, j) = 1.0;
    e(m + j, n + m + j) = 1.0;
    rhs[m + j] = 2.0 * alpha;
  }

  StandardLP lp;
  lp.equality = e;
  lp.rhs = rhs;
  lp.objective.assign(p, 0.0);
  for (int j = 0; j < n; ++j) {
    lp.objective[j] = 1.0;
    LPResult rmin = solve_lp(lp);
    lp.objective[j] = -1.0;
    LPResult rmax = solve_lp(lp);
    lp.objective[j] = 0.0;
    if (rmin.status == LPStatus::Optimal)
      box.lo[j] = std::max(-alpha, rmin.value - alpha);
    if (rmax.status == LPStatus::Optimal)
      box.hi[j] = std::min(alpha, -rmax.value - alpha);
    if (box.hi[j] < box.lo[j]) box.hi[j] = box.lo[j];
  }
  return box;
}

struct Rect {
  Vec center;
  Vec halfwidth;
  double value;
  double size;
};

double rect_size(const Vec& h) { return norm2(h); }

/// Standard potentially-optimal selection: for each distinct size keep the
/// best rectangle, then take the upper convex hull over (size, value).
std::vector<int> potentially_optimal(const std::vector<Rect>& rects) {
  std::vector<int> best_per_size;
  std::vector<int> order(rects.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (rects[i].size != rects[j].size) return rects[i].size < rects[j].size;
    return rects[i].value > rects[j].value;
  });
  for (size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || rects[order[i]].size > rects[order[i - 1]].size * (1 + 1e-12))
      best_per_size.push_back(order[i]);
  }
  // upper hull scan from large sizes down
  std::vector<int> hull;
  for (int idx = static_cast<int>(best_per_size.size()) - 1; idx >= 0; --idx) {
    const Rect& r = rects[best_per_size[idx]];
    bool dominated = false;
    for (int h : hull)
      if (rects[h].value >= r.value) {
        dominated = true;
        break;
      }
    if (!dominated) hull.push_back(best_per_size[idx]);
  }
  return hull;
}

void pattern_refine(InnerOracle& oracle, const Box& box, Vec v, double value,
                    Vec& best_v, double& best, long max_probes) {
  const int n = static_cast<int>(v.size());
  double range = 0.0;
  for (int j = 0; j < n; ++j) range = std::max(range, box.hi[j] - box.lo[j]);
  double h = range / 8.0;
  long probes = 0;
  while (h > 1e-10 * std::max(range, 1e-30) && probes < max_probes) {
    bool improved = false;
    for (int j = 0; j < n && probes < max_probes; ++j) {
      for (double sgn : {+1.0, -1.0}) {
        Vec trial = v;
        trial[j] = std::min(std::max(trial[j] + sgn * h, box.lo[j]), box.hi[j]);
        const double val = oracle(trial);
        ++probes;
        if (std::isfinite(val) && val > value + 1e-13) {
          value = val;
          v = std::move(trial);
          improved = true;
          break;
        }
        if (val == kInf) return;  // gap found; caller handles
      }
    }
    if (!improved) h *= 0.5;
  }
  if (value > best) {
    best = value;
    best_v = v;
  }
}

}  // namespace

LambdaEstimate estimate_lambda(const PollingSet& set, const Polyhedron& omega) {
  if (set.directions.empty())
    throw DimensionMismatch("estimate_lambda: empty polling set");
  const int n = omega.dimension();

  InnerOracle oracle;
  oracle.directions = set.direction_vectors();
  oracle.omega = &omega;
  oracle.x = set.x;
  oracle.alpha = set.alpha;

  LambdaEstimate out;
  out.witness_v.assign(n, 0.0);

  const Box box = feasible_bounding_box(omega, set.x, set.alpha);

  double best = 0.0;  // v = 0 always decomposes with weight 0
  Vec best_v(n, 0.0);
  LambdaMethod method = LambdaMethod::DividingRectangles;

  auto finish_gap = [&]() {
    out.lambda = kInf;
    out.witness_v = oracle.gap_witness;
    out.inner_lp_calls = oracle.lp_calls;
    out.method = method;
    return out;
  };

  // --- dividing rectangles on the bounding box ---
  std::vector<Rect> rects;
  {
    Rect r;
    r.center.resize(n);
    r.halfwidth.resize(n);
    for (int j = 0; j < n; ++j) {
      r.center[j] = 0.5 * (box.lo[j] + box.hi[j]);
      r.halfwidth[j] = 0.5 * (box.hi[j] - box.lo[j]);
    }
    r.value = oracle(r.center);
    if (oracle.found_gap) return finish_gap();
    r.size = rect_size(r.halfwidth);
    if (std::isfinite(r.value) && r.value > best) {
      best = r.value;
      best_v = r.center;
    }
    rects.push_back(std::move(r));
  }
  const int rounds = 10 * n;
  const long direct_eval_cap = 80L * n + 40;
  long direct_evals = 1;
  for (int round = 0; round < rounds && direct_evals < direct_eval_cap;
       ++round) {
    const std::vector<int> selected = potentially_optimal(rects);
    for (int idx : selected) {
      if (direct_evals >= direct_eval_cap) break;
      Rect parent = rects[idx];
      int axis = 0;
      for (int j = 1; j < n; ++j)
        if (parent.halfwidth[j] > parent.halfwidth[axis] * (1 + 1e-12))
          axis = j;
      if (parent.halfwidth[axis] <= 1e-12 * set.alpha) continue;
      const double offset = 2.0 * parent.halfwidth[axis] / 3.0;
      Rect middle = parent;
      middle.halfwidth[axis] /= 3.0;
      middle.size = rect_size(middle.halfwidth);
      for (double sgn : {-1.0, +1.0}) {
        Rect child = middle;
        child.center[axis] = parent.center[axis] + sgn * offset;
        child.value = oracle(child.center);
        direct_evals += 1;
        if (oracle.found_gap) return finish_gap();
        if (std::isfinite(child.value) && child.value > best) {
          best = child.value;
          best_v = child.center;
        }
        rects.push_back(std::move(child));
      }
      rects[idx] = std::move(middle);
    }
  }

  // --- multistart refinement: DIRECT best + box corners + ball diagonals ---
  std::vector<Vec> starts;
  starts.push_back(best_v);
  {
    std::vector<int> by_value(rects.size());
    for (size_t i = 0; i < rects.size(); ++i) by_value[i] = static_cast<int>(i);
    std::sort(by_value.begin(), by_value.end(), [&](int i, int j) {
      return rects[i].value > rects[j].value;
    });
    for (size_t i = 0; i < by_value.size() && i < 5; ++i)
      if (std::isfinite(rects[by_value[i]].value))
        starts.push_back(rects[by_value[i]].center);
  }
  auto add_scaled_candidate = [&](Vec v) {
    // pull the candidate into the admissible region along its own ray
    const double vn = norm2(v);
    if (vn <= 0.0) return;
    double t = std::min(1.0, set.alpha / vn * (1.0 - 1e-13));
    t = std::min(t, omega.max_feasible_scale(set.x, v, 1.0) * (1.0 - 1e-13));
    if (t <= 0.0) return;
    scale_in_place(v, t);
    for (int j = 0; j < n; ++j)
      v[j] = std::min(std::max(v[j], box.lo[j]), box.hi[j]);
    starts.push_back(std::move(v));
  };
  if (n <= 6) {
    for (int mask = 0; mask < (1 << n); ++mask) {
      Vec corner(n), diag(n);
      for (int j = 0; j < n; ++j) {
        corner[j] = (mask >> j & 1) ? box.hi[j] : box.lo[j];
        diag[j] = ((mask >> j & 1) ? 1.0 : -1.0) * set.alpha /
                  std::sqrt(static_cast<double>(n));
      }
      add_scaled_candidate(std::move(corner));
      add_scaled_candidate(std::move(diag));
    }
  } else {
    for (long i = 0; i < 25; ++i) {
      Vec corner(n), diag(n);
      for (int j = 0; j < n; ++j) {
        const bool bit = halton(i + 1, nth_prime(j)) >= 0.5;
        corner[j] = bit ? box.hi[j] : box.lo[j];
        diag[j] = (bit ? 1.0 : -1.0) * set.alpha /
                  std::sqrt(static_cast<double>(n));
      }
      add_scaled_candidate(std::move(corner));
      add_scaled_candidate(std::move(diag));
    }
  }

  // score, dedupe, refine the top 50
  std::vector<std::pair<double, Vec>> scored;
  for (auto& v : starts) {
    bool dup = false;
    for (const auto& sv : scored)
      if (norm2(sub(sv.second, v)) <= 1e-12 * (1.0 + set.alpha)) {
        dup = true;
        break;
      }
    if (dup) continue;
    const double val = oracle(v);
    if (oracle.found_gap) return finish_gap();
    if (std::isfinite(val)) scored.emplace_back(val, std::move(v));
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  if (!scored.empty() && scored.front().first > best) {
    best = scored.front().first;
    best_v = scored.front().second;
    method = LambdaMethod::Multistart;
  }
  const size_t max_starts = 50;
  for (size_t i = 0; i < scored.size() && i < max_starts; ++i) {
    const double before = best;
    pattern_refine(oracle, box, scored[i].second, scored[i].first, best_v, best,
                   16L * n);
    if (oracle.found_gap) return finish_gap();
    if (best > before) method = LambdaMethod::Multistart;
  }

  out.lambda = best;
  out.witness_v = best_v;
  out.inner_lp_calls = oracle.lp_calls;
  out.method = method;
  return out;
}

// ---------------------------------------------------------------------------
// Cosine measure
// ---------------------------------------------------------------------------

namespace {

struct DirectionPack {
  Matrix rows;  // p x n, unit rows
  int p = 0;
  int n = 0;

  double max_cosine(const Vec& v) const {
    return kernels::active().row_dot_max(rows.a.data(), p, n, v.data()) /
           norm2(v);
  }
};

DirectionPack pack_directions(const std::vector<Vec>& directions) {
  if (directions.empty())
    throw DimensionMismatch("cosine_measure: empty direction set");
  DirectionPack pack;
  pack.p = static_cast<int>(directions.size());
  pack.n = static_cast<int>(directions.front().size());
  pack.rows = Matrix(pack.p, pack.n);
  for (int i = 0; i < pack.p; ++i) {
    const double dn = norm2(directions[i]);
    if (dn <= 0.0)
      throw DimensionMismatch("cosine_measure: zero direction");
    if (static_cast<int>(directions[i].size()) != pack.n)
      throw DimensionMismatch("cosine_measure: ragged directions");
    for (int j = 0; j < pack.n; ++j)
      pack.rows(i, j) = directions[i][j] / dn;
  }
  return pack;
}

void sphere_refine(const DirectionPack& pack, Vec v, double value, Vec& best_v,
                   double& best) {
  const int n = pack.n;
  double h = 0.5;
  while (h > 1e-9) {
    bool improved = false;
    for (int j = 0; j < n; ++j) {
      for (double sgn : {+1.0, -1.0}) {
        Vec trial = v;
        trial[j] += sgn * h;
        const double tn = norm2(trial);
        if (tn <= 1e-12) continue;
        scale_in_place(trial, 1.0 / tn);
        const double val = pack.max_cosine(trial);
        if (val < value - 1e-14) {
          value = val;
          v = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) h *= 0.5;
  }
  if (value < best) {
    best = value;
    best_v = v;
  }
}

}  // namespace

CosineMeasure cosine_measure(const std::vector<Vec>& directions,
                             CosineMode mode) {
  const DirectionPack pack = pack_directions(directions);
  const int n = pack.n;
  const int p = pack.p;

  if (mode == CosineMode::Sampled) {
    double best = kInf;
    for (long i = 0; i < 100000; ++i) {
      const Vec v = quasi_random_unit(i, n);
      best = std::min(best, pack.max_cosine(v));
    }
    return {best, true};
  }

  if (n > 4 || p > 12)
    throw std::invalid_argument(
        "cosine_measure: exact mode limited to n <= 4 and |D| <= 12");

  std::vector<Vec> candidates;
  // +/- the directions themselves
  for (int i = 0; i < p; ++i) {
    Vec d(n);
    for (int j = 0; j < n; ++j) d[j] = pack.rows(i, j);
    candidates.push_back(scaled(d, -1.0));
    candidates.push_back(std::move(d));
  }

  // equal-cosine solutions of all n-subsets: G^T u = 1
  std::vector<int> subset;
  auto emit_equal_cosine = [&](const std::vector<int>& idx) {
    Matrix gt(n, n);
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < n; ++j) gt(r, j) = pack.rows(idx[r], j);
    const Lu f = lu_factor(gt, 1e-10);
    if (f.singular) return;
    const Vec u = lu_solve(f, Vec(n, 1.0));
    const double un = norm2(u);
    if (un <= 1e-12) return;
    candidates.push_back(scaled(u, 1.0 / un));
    candidates.push_back(scaled(u, -1.0 / un));
  };
  std::function<void(int, int)> rec = [&](int start, int need) {
    if (need == 0) {
      emit_equal_cosine(subset);
      return;
    }
    for (int i = start; i <= p - need; ++i) {
      subset.push_back(i);
      rec(i + 1, need - 1);
      subset.pop_back();
    }
  };
  rec(0, n);

  // orthogonal complements of subset spans (sizes 1..n-1 and the full set)
  std::function<void(int, int, std::vector<Vec>&)> rec2 =
      [&](int start, int need, std::vector<Vec>& chosen) {
        if (need == 0) {
          const std::vector<Vec> basis = orthonormal_span_basis(chosen);
          if (basis.empty() || static_cast<int>(basis.size()) >= n) return;
          const std::vector<Vec> comp =
              orthonormal_complement(Matrix::from_columns(basis));
          for (const auto& u : comp) {
            candidates.push_back(u);
            candidates.push_back(scaled(u, -1.0));
          }
          return;
        }
        for (int i = start; i <= p - need; ++i) {
          Vec d(n);
          for (int j = 0; j < n; ++j) d[j] = pack.rows(i, j);
          chosen.push_back(std::move(d));
          rec2(i + 1, need - 1, chosen);
          chosen.pop_back();
        }
      };
  for (int size = 1; size < std::min(n, p) + 1; ++size) {
    std::vector<Vec> chosen;
    rec2(0, size, chosen);
  }

  double best = kInf;
  Vec best_v(n, 0.0);
  for (const auto& c : candidates) {
    const double val = pack.max_cosine(c);
    if (val < best) {
      best = val;
      best_v = c;
    }
  }
  // sampled + local refinement sweep
  for (long i = 0; i < 20000; ++i) {
    const Vec v = quasi_random_unit(i, n);
    const double val = pack.max_cosine(v);
    if (val < best) {
      best = val;
      best_v = v;
    }
  }
  sphere_refine(pack, best_v, best, best_v, best);
  return {best, false};
}

LambdaLemmaReport check_lambda_lemmas(const PollingSet& set,
                                      const Polyhedron& omega) {
  LambdaLemmaReport rep;
  if (set.directions.empty()) return rep;
  const std::vector<Vec> dirs = set.direction_vectors();
  double dmin = kInf, dmax = 0.0;
  for (const auto& d : dirs) {
    const double dn = norm2(d);
    dmin = std::min(dmin, dn);
    dmax = std::max(dmax, dn);
  }
  rep.d_min = dmin / set.alpha;
  rep.d_max = dmax / set.alpha;

  const bool exact_ok =
      static_cast<int>(set.x.size()) <= 4 && static_cast<int>(dirs.size()) <= 12;
  rep.cm = cosine_measure(dirs, exact_ok ? CosineMode::Exact
                                         : CosineMode::Sampled)
               .value;

  const LambdaEstimate est = estimate_lambda(set, omega);
  rep.lambda_estimate = est.lambda;

  rep.applicable = rep.cm > 0.0;
  if (rep.applicable) {
    rep.lambda_upper_from_cm = 1.0 / (rep.d_min * rep.cm);
    rep.cm_lower_consistent =
        rep.cm * rep.d_max * rep.lambda_upper_from_cm >= 1.0 - 1e-9;
    rep.estimate_below_upper =
        rep.lambda_estimate <= rep.lambda_upper_from_cm + 1e-6;
  }
  return rep;
}

}  // namespace dsopt
