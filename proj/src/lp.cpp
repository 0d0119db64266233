#include "dsopt/lp.hpp"

#include <algorithm>
#include <cmath>

#include "dsopt/errors.hpp"
#include "dsopt/kernels.hpp"
#include "dsopt/numerics.hpp"

namespace dsopt {

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr int kRefactorEvery = 50;
constexpr int kMaxPivots = 100000;

struct Tableau {
  int m = 0;                  // rows
  int total = 0;              // structural + artificial columns
  int structural = 0;
  Matrix cols;                // m x total, column j = constraint column
  Vec rhs;                    // length m, >= 0 after sign flips
  std::vector<int> basis;     // m entries, variable index per row
  Matrix binv;                // m x m dense basis inverse
  int pivots_since_refactor = 0;

  Vec column(int j) const { return cols.column(j); }

  void refactor() {
    Matrix b(m, m);
    for (int i = 0; i < m; ++i)
      for (int r = 0; r < m; ++r) b(r, i) = cols(r, basis[i]);
    const Lu f = lu_factor(b);
    if (f.singular)
      throw NumericalBreakdown("solve_lp: singular basis at refactorization");
    binv = Matrix(m, m);
    Vec e(m, 0.0);
    for (int k = 0; k < m; ++k) {
      e[k] = 1.0;
      const Vec col = lu_solve(f, e);
      for (int r = 0; r < m; ++r) binv(r, k) = col[r];
      e[k] = 0.0;
    }
    pivots_since_refactor = 0;
  }

  Vec basic_values() const { return matvec(binv, rhs); }

  Vec duals(const Vec& cost) const {
    Vec cb(m);
    for (int i = 0; i < m; ++i) cb[i] = cost[basis[i]];
    return matvec_t(binv, cb);
  }

  void pivot(int leave_row, int enter_col, const Vec& direction) {
    const double piv = direction[leave_row];
    double* lrow = binv.a.data() + static_cast<size_t>(leave_row) * m;
    kernels::active().scal(1.0 / piv, lrow, m);
    for (int i = 0; i < m; ++i) {
      if (i == leave_row) continue;
      const double f = direction[i];
      if (f != 0.0)
        kernels::active().axpy(-f, lrow,
                               binv.a.data() + static_cast<size_t>(i) * m, m);
    }
    basis[leave_row] = enter_col;
    if (++pivots_since_refactor >= kRefactorEvery) refactor();
  }
};

enum class PhaseOutcome { Optimal, Unbounded };

/// One simplex phase with Bland's rule. `allowed` masks columns eligible to
/// enter the basis.
PhaseOutcome run_phase(Tableau& t, const Vec& cost,
                       const std::vector<bool>& allowed) {
  for (int iter = 0; iter < kMaxPivots; ++iter) {
    const Vec y = t.duals(cost);
    int enter = -1;
    for (int j = 0; j < t.total; ++j) {
      if (!allowed[j]) continue;
      bool basic = false;
      for (int i = 0; i < t.m; ++i)
        if (t.basis[i] == j) {
          basic = true;
          break;
        }
      if (basic) continue;
      double rc = cost[j];
      for (int i = 0; i < t.m; ++i) rc -= y[i] * t.cols(i, j);
      if (rc < -kCostTol) {
        enter = j;  // Bland: first (smallest-index) improving column
        break;
      }
    }
    if (enter < 0) return PhaseOutcome::Optimal;

    const Vec d = matvec(t.binv, t.column(enter));
    const Vec xb = t.basic_values();
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < t.m; ++i) {
      if (d[i] > kPivotTol) {
        const double ratio = std::max(xb[i], 0.0) / d[i];
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::fabs(ratio - best_ratio) <= 1e-12 &&
             t.basis[i] < t.basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return PhaseOutcome::Unbounded;
    t.pivot(leave, enter, d);
  }
  throw NumericalBreakdown("solve_lp: pivot limit exceeded");
}

LPResult solve_reduced(const StandardLP& lp);

LPResult solve_with_rows(const StandardLP& lp) {
  const int m = lp.equality.rows;
  const int p = lp.equality.cols;

  Tableau t;
  t.m = m;
  t.structural = p;
  t.total = p + m;
  t.cols = Matrix(m, t.total);
  t.rhs = lp.rhs;
  // flip rows so rhs >= 0, then append artificial identity columns
  for (int i = 0; i < m; ++i) {
    const double sgn = (t.rhs[i] < 0.0) ? -1.0 : 1.0;
    t.rhs[i] *= sgn;
    for (int j = 0; j < p; ++j) t.cols(i, j) = sgn * lp.equality(i, j);
    t.cols(i, p + i) = 1.0;
  }
  t.basis.resize(m);
  for (int i = 0; i < m; ++i) t.basis[i] = p + i;
  t.binv = Matrix::identity(m);

  // Phase I: minimize the sum of artificials.
  Vec cost1(t.total, 0.0);
  for (int i = 0; i < m; ++i) cost1[p + i] = 1.0;
  std::vector<bool> allowed(t.total, true);
  if (run_phase(t, cost1, allowed) == PhaseOutcome::Unbounded)
    throw NumericalBreakdown("solve_lp: phase I unbounded");
  {
    const Vec xb = t.basic_values();
    double phase1 = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= p) phase1 += std::max(xb[i], 0.0);
    if (phase1 > 1e-9) return {LPStatus::Infeasible, 0.0, {}, {}};
  }

  // Drive remaining artificials out of the basis; rows where that is
  // impossible are linearly dependent and get dropped.
  std::vector<int> redundant;
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < p) continue;
    int enter = -1;
    Vec d;
    for (int j = 0; j < p && enter < 0; ++j) {
      bool basic = false;
      for (int r = 0; r < m; ++r)
        if (t.basis[r] == j) {
          basic = true;
          break;
        }
      if (basic) continue;
      Vec dj = matvec(t.binv, t.column(j));
      if (std::fabs(dj[i]) > 1e-8) {
        enter = j;
        d = std::move(dj);
      }
    }
    if (enter >= 0)
      t.pivot(i, enter, d);
    else
      redundant.push_back(i);
  }
  if (!redundant.empty()) {
    StandardLP reduced = lp;
    std::vector<bool> drop(m, false);
    for (int i : redundant) drop[i] = true;
    Matrix e(m - static_cast<int>(redundant.size()), p);
    Vec r;
    int out = 0;
    for (int i = 0; i < m; ++i) {
      if (drop[i]) continue;
      for (int j = 0; j < p; ++j) e(out, j) = lp.equality(i, j);
      r.push_back(lp.rhs[i]);
      ++out;
    }
    reduced.equality = std::move(e);
    reduced.rhs = std::move(r);
    return solve_reduced(reduced);
  }

  // Phase II on structural columns only.
  Vec cost2(t.total, 0.0);
  for (int j = 0; j < p; ++j) cost2[j] = lp.objective[j];
  std::fill(allowed.begin() + p, allowed.end(), false);
  if (run_phase(t, cost2, allowed) == PhaseOutcome::Unbounded)
    return {LPStatus::Unbounded, 0.0, {}, {}};

  LPResult res;
  res.status = LPStatus::Optimal;
  res.solution.assign(p, 0.0);
  const Vec xb = t.basic_values();
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < p) res.solution[t.basis[i]] = std::max(xb[i], 0.0);
  res.value = dot(res.solution, lp.objective);
  // duals in the original row signs
  const Vec y = t.duals(cost2);
  res.duals.resize(m);
  for (int i = 0; i < m; ++i)
    res.duals[i] = (lp.rhs[i] < 0.0) ? -y[i] : y[i];
  return res;
}

LPResult solve_reduced(const StandardLP& lp) { return solve_with_rows(lp); }

}  // namespace

LPResult solve_lp(const StandardLP& lp) {
  const int m = lp.equality.rows;
  const int p = lp.equality.cols;
  if (static_cast<int>(lp.objective.size()) != p ||
      static_cast<int>(lp.rhs.size()) != m)
    throw DimensionMismatch("solve_lp: inconsistent LP sizes");
  if (!lp.equality.all_finite())
    throw DimensionMismatch("solve_lp: non-finite matrix");
  if (m == 0) {
    // No constraints: x = 0 is optimal unless some cost is negative.
    for (double cj : lp.objective)
      if (cj < -kCostTol) return {LPStatus::Unbounded, 0.0, {}, {}};
    LPResult res;
    res.status = LPStatus::Optimal;
    res.value = 0.0;
    res.solution.assign(p, 0.0);
    return res;
  }
  return solve_with_rows(lp);
}

LPResult min_l1_decomposition(const std::vector<Vec>& directions,
                              const Vec& v) {
  const int p = static_cast<int>(directions.size());
  StandardLP lp;
  lp.objective.assign(p, 1.0);
  lp.equality = Matrix::from_columns(directions);
  if (p == 0) {
    lp.equality = Matrix(static_cast<int>(v.size()), 0);
  }
  if (lp.equality.rows != static_cast<int>(v.size()))
    throw DimensionMismatch("min_l1_decomposition: dimension mismatch");
  lp.rhs = v;
  return solve_lp(lp);
}

}  // namespace dsopt
