#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dsopt/problem_io.hpp"
#include "dsopt/solver.hpp"

namespace dsopt {

/// One (problem, variant) outcome kept for profiling.
struct BenchRun {
  std::string problem;
  std::string tag;
  int n = 0;
  PollStrategy strategy = PollStrategy::FullLambdaPSS;
  double f0 = 0.0;
  double best_f = 0.0;
  int eval_count = 0;
  Termination termination = Termination::Budget;
  Vec best_f_by_eval;
  std::string error;  // non-empty when the run failed
};

struct BenchResults {
  std::vector<BenchRun> runs;  // ordered by (problem, variant)
  std::vector<std::string> problems;
};

/// Run every (problem, variant) pair with the same configuration. Individual
/// failures are recorded and the batch continues.
BenchResults run_benchmark(const std::vector<LoadedProblem>& corpus,
                           const std::vector<PollStrategy>& variants,
                           const SolverConfig& config, int max_threads = 0);

constexpr int kNeverSolved = std::numeric_limits<int>::max();

/// Smallest evaluation count whose best feasible value meets
/// f_min + tau*(f0 - f_min); kNeverSolved if the run never does.
int solved_after(const Vec& best_f_by_eval, double f_min, double f0,
                 double tau);

struct ProfilePoint {
  double x = 0.0;
  double proportion = 0.0;
};

struct ProfileCurve {
  std::string variant;
  double tau = 0.0;
  std::vector<ProfilePoint> points;  // step function, x ascending
};

struct ProfileTable {
  std::vector<ProfileCurve> curves;
  int total_problems = 0;
};

/// Data profile: proportion of problems solved within c*(n+1) evaluations.
ProfileTable data_profile(const BenchResults& results, double tau);
/// Performance profile: proportion solved within a factor c of the fastest
/// variant on each problem.
ProfileTable performance_profile(const BenchResults& results, double tau);

/// CSV with header variant,tau,x,proportion; floats at 17 significant digits.
std::string profile_csv(const ProfileTable& table);
/// Deterministic step-plot SVG.
std::string profile_svg(const ProfileTable& table, const std::string& title,
                        const std::string& x_label);

std::string format_float(double v);  // %.17g

}  // namespace dsopt
