#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsopt/matrix.hpp"
#include "dsopt/polling.hpp"
#include "dsopt/polyhedron.hpp"

namespace dsopt {

struct SolverConfig {
  double gamma_dec = 0.5;
  double gamma_inc = 2.0;
  double alpha_max = 1e3;
  double alpha_min = 1e-6;
  double forcing_eps = 1e-5;  // sufficient decrease min(eps, eps*alpha^2)
  int budget_multiplier = 200;  // budget = multiplier * (n+1) evaluations
  PollStrategy strategy = PollStrategy::FullLambdaPSS;
  std::optional<double> alpha0;  // default: clamp(0.1*max(||x0||_inf,1))
};

enum class Termination { AlphaMin, Budget, UserStop };

const char* to_string(Termination t);

struct IterateRecord {
  int k = 0;
  Vec x;          // iterate at the end of iteration k
  double f = 0.0;
  double alpha = 0.0;  // stepsize used during iteration k
  bool success = false;
  std::optional<Provenance> accepted_provenance;
  ConstructionCase construction_case = ConstructionCase::Unconstrained;
  int evals_after = 0;
};

struct BestPoint {
  int eval_index = 0;  // 1-based evaluation count at which this best was found
  double f = 0.0;
  Vec x;
};

struct SolverRun {
  std::vector<IterateRecord> iterates;
  int eval_count = 0;
  Vec best_f_by_eval;                 // entry e-1 = best feasible f after e evals
  std::vector<BestPoint> improvements;
  Termination termination = Termination::Budget;
  Vec final_x;
  double final_f = 0.0;
};

struct ProblemInstance {
  std::string name;
  std::function<double(const Vec&)> objective;
  Polyhedron omega;
  Vec x0;
  std::optional<double> f_ref;
  std::function<Vec(const Vec&)> gradient;  // optional, diagnostics only
};

/// Called after every iteration; return true to stop (Termination::UserStop).
using IterationObserver = std::function<bool(const IterateRecord&)>;

/// The direct-search loop: poll strategy_pss(x_k, alpha_k) opportunistically,
/// accept the first feasible direction with
/// f(x_k + d) < f(x_k) - min(eps, eps*alpha_k^2), expand/shrink alpha by
/// gamma_inc/gamma_dec, stop at alpha_min or when the budget runs out.
SolverRun direct_search(const ProblemInstance& problem,
                        const SolverConfig& config,
                        const IterationObserver& observer = nullptr);

struct PiResult {
  double value = 0.0;
  Vec witness;  // ||witness|| <= 1, x + witness feasible
};

/// Stationarity measure pi(x) = |min { g^T v : x+v in Omega, ||v|| <= 1 }|,
/// computed over the shifted feasible set with Dykstra projections.
PiResult criticality_pi(const Vec& x, const Vec& g, const Polyhedron& omega,
                        double tol = 1e-6);

struct ComplexityCheck {
  int observed_iterations = 0;   // iterations until ||grad f|| <= eps
  double bound = 0.0;            // worst-case iteration bound
  bool reached_target = false;
  bool within_bound = false;
};

/// Empirical check of the worst-case iteration bound on an unconstrained
/// problem with known gradient Lipschitz constant and lower bound; the bound
/// is evaluated with Lambda = sqrt(n), d_max = 1, sigma = 2*forcing_eps.
ComplexityCheck empirical_complexity_check(const ProblemInstance& problem,
                                           const SolverConfig& config,
                                           double eps, double lipschitz,
                                           double f_low);

}  // namespace dsopt
