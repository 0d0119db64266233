#include "dsopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsopt/errors.hpp"

namespace dsopt {

namespace {

double forcing(double eps, double alpha) {
  return std::min(eps, eps * alpha * alpha);
}

double evaluate(const ProblemInstance& problem, const Vec& x, int k) {
  try {
    return problem.objective(x);
  } catch (const std::exception& e) {
    throw ObjectiveEvaluationFailure("objective evaluation failed at iteration " +
                                     std::to_string(k) + ": " + e.what());
  }
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::AlphaMin: return "alpha-min";
    case Termination::Budget: return "budget";
    case Termination::UserStop: return "user-stop";
  }
  return "?";
}

SolverRun direct_search(const ProblemInstance& problem,
                        const SolverConfig& config,
                        const IterationObserver& observer) {
  const int n = problem.omega.dimension();
  if (static_cast<int>(problem.x0.size()) != n)
    throw DimensionMismatch("direct_search: x0 dimension mismatch");
  if (!problem.omega.is_feasible(problem.x0, 1e-8))
    throw InfeasibleProblem("direct_search: infeasible start point");

  const int budget = config.budget_multiplier * (n + 1);
  double alpha =
      config.alpha0
          ? std::min(*config.alpha0, config.alpha_max)
          : std::clamp(0.1 * std::max(norm_inf(problem.x0), 1.0),
                       config.alpha_min, config.alpha_max);

  SolverRun run;
  Vec x = problem.x0;
  double fx = evaluate(problem, x, 0);
  if (!std::isfinite(fx))
    throw ObjectiveEvaluationFailure(
        "direct_search: objective not finite at the start point");
  run.eval_count = 1;
  run.best_f_by_eval.push_back(fx);
  run.improvements.push_back({1, fx, x});

  double best_f = fx;
  bool stop = false;
  for (int k = 0; !stop; ++k) {
    if (run.eval_count >= budget) {
      run.termination = Termination::Budget;
      break;
    }
    const PollingSet polls =
        strategy_pss(x, alpha, problem.omega, config.strategy);

    bool success = false;
    bool budget_hit = false;
    std::optional<Provenance> accepted;
    const double threshold = fx - forcing(config.forcing_eps, alpha);
    for (const auto& pd : polls.directions) {
      if (run.eval_count >= budget) {
        budget_hit = true;
        break;
      }
      Vec trial = add(x, pd.d);
      if (!problem.omega.is_feasible(trial)) continue;  // no evaluation spent
      const double ft = evaluate(problem, trial, k);
      ++run.eval_count;
      const bool usable = std::isfinite(ft);
      if (usable && ft < best_f) {
        best_f = ft;
        run.improvements.push_back({run.eval_count, ft, trial});
      }
      run.best_f_by_eval.push_back(best_f);
      if (usable && ft < threshold) {
        x = std::move(trial);
        fx = ft;
        success = true;
        accepted = pd.provenance;
        break;
      }
    }

    IterateRecord rec;
    rec.k = k;
    rec.x = x;
    rec.f = fx;
    rec.alpha = alpha;
    rec.success = success;
    rec.accepted_provenance = accepted;
    rec.construction_case = polls.construction_case;
    rec.evals_after = run.eval_count;
    run.iterates.push_back(rec);

    if (success) {
      alpha = std::min(config.gamma_inc * alpha, config.alpha_max);
    } else {
      alpha = config.gamma_dec * alpha;
      if (alpha <= config.alpha_min) {
        run.termination = Termination::AlphaMin;
        stop = true;
      }
    }
    if (budget_hit || run.eval_count >= budget) {
      run.termination = Termination::Budget;
      stop = true;
    }
    if (!stop && observer && observer(run.iterates.back())) {
      run.termination = Termination::UserStop;
      stop = true;
    }
  }

  run.final_x = x;
  run.final_f = fx;
  return run;
}

namespace {

/// Dykstra projection onto {v : rows_i^T v <= rhs_i} n B(0, radius).
Vec dykstra_ball_polytope(const Vec& z, const std::vector<Vec>& rows,
                          const Vec& rhs, double radius, double tol,
                          int max_iter) {
  const size_t m = rows.size();
  Vec y = z;
  std::vector<Vec> corrections(m + 1, Vec(z.size(), 0.0));
  Vec row_nsq(m);
  for (size_t i = 0; i < m; ++i) row_nsq[i] = norm2sq(rows[i]);

  for (int it = 0; it < max_iter; ++it) {
    double max_change = 0.0;
    for (size_t i = 0; i <= m; ++i) {
      Vec w = add(y, corrections[i]);
      Vec y_new = w;
      if (i < m) {
        const double viol = dot(rows[i], w) - rhs[i];
        if (viol > 0.0) axpy(-viol / row_nsq[i], rows[i], y_new);
      } else {
        const double wn = norm2(w);
        if (wn > radius) scale_in_place(y_new, radius / wn);
      }
      corrections[i] = sub(w, y_new);
      max_change = std::max(max_change, norm_inf(sub(y_new, y)));
      y = std::move(y_new);
    }
    if (max_change <= tol) return y;
  }
  throw NoConvergence("criticality_pi: Dykstra did not converge", norm2(y));
}

}  // namespace

PiResult criticality_pi(const Vec& x, const Vec& g, const Polyhedron& omega,
                        double tol) {
  const int n = omega.dimension();
  if (static_cast<int>(x.size()) != n || static_cast<int>(g.size()) != n)
    throw DimensionMismatch("criticality_pi: dimension mismatch");
  for (double v : g)
    if (!std::isfinite(v))
      throw DimensionMismatch("criticality_pi: non-finite gradient");

  PiResult res;
  res.witness.assign(n, 0.0);
  const double gn = norm2(g);
  if (gn == 0.0) return res;
  const Vec ghat = scaled(g, 1.0 / gn);

  const Vec s = omega.slacks(x);
  std::vector<Vec> rows = omega.rows();
  Vec rhs(s.size());
  for (size_t i = 0; i < s.size(); ++i) rhs[i] = std::max(s[i], 0.0);

  // Fast path: the unconstrained minimizer -g/||g|| is optimal when feasible.
  {
    Vec cand = scaled(ghat, -1.0);
    bool ok = true;
    for (size_t i = 0; i < rows.size(); ++i)
      if (dot(rows[i], cand) > rhs[i] + 1e-12) {
        ok = false;
        break;
      }
    if (ok) {
      res.value = gn;
      res.witness = std::move(cand);
      return res;
    }
  }

  // The linear objective's minimizer over the compact intersection is the
  // limit of projections of -M*ghat; suboptimality is bounded by diam^2/(2M).
  const double offset = 1e7;
  Vec far = scaled(ghat, -offset);
  Vec v = dykstra_ball_polytope(far, rows, rhs, 1.0, 1e-10, 20000);
  double best = dot(g, v);
  Vec best_v = v;

  // Short projected-descent polish; keeps the best point seen.
  double step = 0.25;
  for (int t = 0; t < 60; ++t) {
    Vec trial = best_v;
    axpy(-step, ghat, trial);
    trial = dykstra_ball_polytope(trial, rows, rhs, 1.0, 1e-10, 20000);
    const double val = dot(g, trial);
    if (val < best - 1e-15) {
      best = val;
      best_v = std::move(trial);
    } else {
      step *= 0.5;
      if (step < tol * 1e-3) break;
    }
  }

  if (best < 0.0) {
    res.value = -best;
    res.witness = std::move(best_v);
  }
  return res;
}

ComplexityCheck empirical_complexity_check(const ProblemInstance& problem,
                                           const SolverConfig& config,
                                           double eps, double lipschitz,
                                           double f_low) {
  if (!problem.gradient)
    throw DimensionMismatch("empirical_complexity_check: gradient oracle required");
  const int n = problem.omega.dimension();

  ComplexityCheck out;
  const double f0 = problem.objective(problem.x0);
  const double sigma = 2.0 * config.forcing_eps;
  const double lambda = std::sqrt(static_cast<double>(n));
  const double d_max = 1.0;
  const double alpha_min_thm =
      config.gamma_dec * 2.0 * eps /
      ((lipschitz * d_max * d_max + sigma) * lambda);
  const double alpha0 =
      config.alpha0
          ? std::min(*config.alpha0, config.alpha_max)
          : std::clamp(0.1 * std::max(norm_inf(problem.x0), 1.0),
                       config.alpha_min, config.alpha_max);
  const double log_ratio = std::log(1.0 / config.gamma_dec);
  out.bound = (1.0 + std::log(config.gamma_inc) / log_ratio) *
                  (2.0 * (f0 - f_low) / (sigma * alpha_min_thm * alpha_min_thm)) +
              std::log(alpha0 / alpha_min_thm) / log_ratio;

  if (norm2(problem.gradient(problem.x0)) <= eps) {
    out.observed_iterations = 0;
    out.reached_target = true;
    out.within_bound = true;
    return out;
  }

  int reached_at = -1;
  const IterationObserver observer = [&](const IterateRecord& rec) {
    if (norm2(problem.gradient(rec.x)) <= eps) {
      reached_at = rec.k + 1;  // target met at iterate x_{k+1}
      return true;
    }
    return false;
  };
  direct_search(problem, config, observer);

  if (reached_at < 0) {
    out.observed_iterations = std::numeric_limits<int>::max();
    out.reached_target = false;
    out.within_bound = false;
    return out;
  }
  out.observed_iterations = reached_at;
  out.reached_target = true;
  out.within_bound = static_cast<double>(reached_at) <= out.bound;
  return out;
}

}  // namespace dsopt
