// Command-line front end: solve a single problem, run the benchmark corpus,
// build data/performance profiles, audit per-iteration Lambda estimates, and
// inspect polling sets.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsopt/audit.hpp"
#include "dsopt/bench.hpp"
#include "dsopt/errors.hpp"
#include "dsopt/problem_io.hpp"
#include "dsopt/solver.hpp"

namespace fs = std::filesystem;
using namespace dsopt;

namespace {

PollStrategy parse_strategy(const std::string& s) {
  if (s == "t" || s == "tangent") return PollStrategy::TangentOnly;
  if (s == "tn" || s == "tangent+normal") return PollStrategy::TangentPlusNormal;
  if (s == "full") return PollStrategy::FullLambdaPSS;
  throw CLI::ValidationError("--strategy", "expected one of: t, tn, full");
}

std::string trace_csv(const SolverRun& run, PollStrategy strategy, int n) {
  std::ostringstream out;
  out << "# strategy=" << to_string(strategy) << "\n";
  out << "k,f,alpha,success,provenance,evals";
  for (int j = 1; j <= n; ++j) out << ",x" << j;
  out << "\n";
  for (const auto& rec : run.iterates) {
    out << rec.k << ',' << format_float(rec.f) << ','
        << format_float(rec.alpha) << ',' << (rec.success ? 1 : 0) << ','
        << (rec.accepted_provenance ? to_string(*rec.accepted_provenance) : "-")
        << ',' << rec.evals_after;
    for (int j = 0; j < n; ++j) out << ',' << format_float(rec.x[j]);
    out << "\n";
  }
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::vector<LoadedProblem> load_corpus(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::runtime_error("no .json problems found in " + dir);
  std::vector<LoadedProblem> corpus;
  for (const auto& f : files) corpus.push_back(load_problem(f.string()));
  return corpus;
}

std::string results_csv(const BenchResults& results) {
  std::ostringstream out;
  out << "problem,tag,n,variant,f0,best_f,evals,termination,error\n";
  for (const auto& r : results.runs) {
    out << r.problem << ',' << r.tag << ',' << r.n << ','
        << to_string(r.strategy) << ',' << format_float(r.f0) << ','
        << format_float(r.best_f) << ',' << r.eval_count << ','
        << to_string(r.termination) << ',' << r.error << "\n";
  }
  return out.str();
}

std::string history_csv(const BenchRun& r) {
  std::ostringstream out;
  out << "eval,best_f\n";
  for (size_t e = 0; e < r.best_f_by_eval.size(); ++e)
    out << (e + 1) << ',' << format_float(r.best_f_by_eval[e]) << "\n";
  return out.str();
}

BenchResults read_results_dir(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "results.csv");
  if (!in)
    throw std::runtime_error("missing results.csv in " + dir);
  BenchResults results;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    BenchRun run;
    std::getline(ss, run.problem, ',');
    std::getline(ss, run.tag, ',');
    std::getline(ss, field, ',');
    run.n = std::stoi(field);
    std::string variant;
    std::getline(ss, variant, ',');
    if (variant == "tangent") run.strategy = PollStrategy::TangentOnly;
    else if (variant == "tangent+normal") run.strategy = PollStrategy::TangentPlusNormal;
    else run.strategy = PollStrategy::FullLambdaPSS;
    std::getline(ss, field, ',');
    run.f0 = std::stod(field);
    std::getline(ss, field, ',');
    run.best_f = std::stod(field);
    std::getline(ss, field, ',');
    run.eval_count = std::stoi(field);
    std::getline(ss, field, ',');
    std::getline(ss, run.error, ',');
    if (!run.error.empty()) {
      results.runs.push_back(std::move(run));
      continue;
    }
    // history file
    const fs::path hist =
        fs::path(dir) / (run.problem + "__" + variant + ".history.csv");
    std::ifstream hin(hist);
    if (!hin) throw std::runtime_error("missing history " + hist.string());
    std::string hline;
    std::getline(hin, hline);
    while (std::getline(hin, hline)) {
      const size_t comma = hline.find(',');
      if (comma == std::string::npos) continue;
      run.best_f_by_eval.push_back(std::stod(hline.substr(comma + 1)));
    }
    results.runs.push_back(std::move(run));
  }
  std::vector<std::string> seen;
  for (const auto& r : results.runs)
    if (std::find(seen.begin(), seen.end(), r.problem) == seen.end())
      seen.push_back(r.problem);
  results.problems = std::move(seen);
  return results;
}

void emit_profiles(const BenchResults& results, const fs::path& out_dir,
                   const std::vector<double>& taus, const std::string& suffix) {
  for (double tau : taus) {
    std::ostringstream tag;
    tag << "tau" << tau;
    std::string tname = tag.str();
    std::replace(tname.begin(), tname.end(), '.', 'p');
    std::replace(tname.begin(), tname.end(), '-', 'm');

    const ProfileTable dp = data_profile(results, tau);
    write_file(out_dir / ("data_profile_" + tname + suffix + ".csv"),
               profile_csv(dp));
    write_file(out_dir / ("data_profile_" + tname + suffix + ".svg"),
               profile_svg(dp, "Data profile, tau=" + format_float(tau),
                           "evaluations / (n+1)"));
    const ProfileTable pp = performance_profile(results, tau);
    write_file(out_dir / ("perf_profile_" + tname + suffix + ".csv"),
               profile_csv(pp));
    write_file(out_dir / ("perf_profile_" + tname + suffix + ".svg"),
               profile_svg(pp, "Performance profile, tau=" + format_float(tau),
                           "ratio to fastest"));
  }
}

int cmd_solve(const std::string& path, const std::string& strategy,
              double alpha0, int budget_mult, const std::string& trace_out) {
  const LoadedProblem problem = load_problem(path);
  SolverConfig config;
  config.strategy = parse_strategy(strategy);
  if (alpha0 > 0.0) config.alpha0 = alpha0;
  if (budget_mult > 0) config.budget_multiplier = budget_mult;
  const SolverRun run = direct_search(problem.instance, config);
  std::cout << "problem: " << problem.instance.name << "\n"
            << "strategy: " << to_string(config.strategy) << "\n"
            << "iterations: " << run.iterates.size() << "\n"
            << "evaluations: " << run.eval_count << "\n"
            << "termination: " << to_string(run.termination) << "\n"
            << "best f: " << format_float(run.best_f_by_eval.back()) << "\n";
  std::cout << "best x:";
  for (double v : run.improvements.back().x) std::cout << ' ' << format_float(v);
  std::cout << "\n";
  if (problem.instance.f_ref)
    std::cout << "f_ref: " << format_float(*problem.instance.f_ref) << "\n";
  if (!trace_out.empty())
    write_file(trace_out, trace_csv(run, config.strategy,
                                    problem.instance.omega.dimension()));
  return 0;
}

int cmd_bench(const std::string& corpus_dir, const std::string& out_dir,
              int budget_mult, int threads) {
  const std::vector<LoadedProblem> corpus = load_corpus(corpus_dir);
  SolverConfig config;
  if (budget_mult > 0) config.budget_multiplier = budget_mult;
  const std::vector<PollStrategy> variants = {PollStrategy::TangentOnly,
                                              PollStrategy::TangentPlusNormal,
                                              PollStrategy::FullLambdaPSS};
  const BenchResults results = run_benchmark(corpus, variants, config, threads);
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "results.csv", results_csv(results));
  for (const auto& r : results.runs) {
    if (!r.error.empty()) continue;
    write_file(fs::path(out_dir) /
                   (r.problem + "__" + to_string(r.strategy) + ".history.csv"),
               history_csv(r));
  }
  int failures = 0;
  for (const auto& r : results.runs)
    if (!r.error.empty()) {
      ++failures;
      std::cerr << "run failed: " << r.problem << " / " << to_string(r.strategy)
                << ": " << r.error << "\n";
    }
  std::cout << "ran " << results.runs.size() << " (problem, variant) pairs, "
            << failures << " failures; results in " << out_dir << "\n";
  return 0;
}

int cmd_profiles(const std::string& results_dir, const std::string& taus_arg,
                 bool split_by_tag) {
  std::vector<double> taus;
  std::stringstream ss(taus_arg);
  std::string item;
  while (std::getline(ss, item, ',')) taus.push_back(std::stod(item));
  if (taus.empty()) throw CLI::ValidationError("--tau", "no tau levels given");

  const BenchResults results = read_results_dir(results_dir);
  emit_profiles(results, results_dir, taus, "");
  if (split_by_tag) {
    std::map<std::string, BenchResults> by_tag;
    for (const auto& r : results.runs) by_tag[r.tag].runs.push_back(r);
    for (auto& [tag, sub] : by_tag) {
      for (const auto& r : sub.runs)
        if (std::find(sub.problems.begin(), sub.problems.end(), r.problem) ==
            sub.problems.end())
          sub.problems.push_back(r.problem);
      emit_profiles(sub, results_dir, taus, "_" + tag);
    }
  }
  std::cout << "profiles written to " << results_dir << "\n";
  return 0;
}

int cmd_lambda_audit(const std::string& problem_path,
                     const std::string& trace_path,
                     const std::string& out_path) {
  const LoadedProblem problem = load_problem(problem_path);
  std::ifstream in(trace_path);
  if (!in) throw std::runtime_error("cannot open trace " + trace_path);

  PollStrategy strategy = PollStrategy::FullLambdaPSS;
  std::string line;
  std::ostringstream out;
  out << "iteration,construction_case,lambda,lambda_over_sqrt_n\n";
  const int n = problem.instance.omega.dimension();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.rfind("# strategy=", 0) == 0) {
      const std::string s = line.substr(11);
      if (s == "tangent") strategy = PollStrategy::TangentOnly;
      else if (s == "tangent+normal") strategy = PollStrategy::TangentPlusNormal;
      else strategy = PollStrategy::FullLambdaPSS;
      continue;
    }
    if (!header_seen) {
      header_seen = true;  // column header line
      continue;
    }
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string field;
    std::vector<std::string> cols;
    while (std::getline(fields, field, ',')) cols.push_back(field);
    if (static_cast<int>(cols.size()) < 6 + n)
      throw ParseError(trace_path + ": trace row lacks iterate coordinates");
    const int k = std::stoi(cols[0]);
    const double alpha = std::stod(cols[2]);
    Vec x(n);
    for (int j = 0; j < n; ++j) x[j] = std::stod(cols[6 + j]);
    const PollingSet set =
        strategy_pss(x, alpha, problem.instance.omega, strategy);
    if (set.directions.empty()) {
      out << k << ',' << to_string(set.construction_case) << ",inf,inf\n";
      continue;
    }
    const LambdaEstimate est = estimate_lambda(set, problem.instance.omega);
    out << k << ',' << to_string(set.construction_case) << ','
        << format_float(est.lambda) << ',' << format_float(est.lambda / sqrt_n)
        << "\n";
  }
  if (out_path.empty())
    std::cout << out.str();
  else
    write_file(out_path, out.str());
  return 0;
}

int cmd_poll_inspect(const std::string& problem_path, const Vec& x,
                     double alpha, const std::string& strategy) {
  const LoadedProblem problem = load_problem(problem_path);
  const Polyhedron& omega = problem.instance.omega;
  if (static_cast<int>(x.size()) != omega.dimension())
    throw CLI::ValidationError("--x", "point dimension mismatch");
  if (!omega.is_feasible(x, 1e-9))
    throw std::runtime_error("poll-inspect: point is infeasible");

  const PollingSet set = strategy_pss(x, alpha, omega, parse_strategy(strategy));
  std::cout << "x:";
  for (double v : x) std::cout << ' ' << format_float(v);
  std::cout << "\nalpha: " << format_float(alpha) << "\n"
            << "strategy: " << to_string(set.strategy) << "\n"
            << "construction case: " << to_string(set.construction_case) << "\n";
  const ActiveSet active = omega.nearly_active(x, alpha);
  std::cout << "nearly active rows:";
  for (int i : active.indices) std::cout << ' ' << i;
  std::cout << "\n";
  if (set.certified_lambda)
    std::cout << "certified lambda: " << format_float(*set.certified_lambda)
              << "\n";
  if (set.degenerate) std::cout << "degenerate: yes\n";
  std::cout << "directions (" << set.directions.size() << "):\n";
  for (size_t i = 0; i < set.directions.size(); ++i) {
    const auto& pd = set.directions[i];
    std::cout << "  [" << i << "] " << to_string(pd.provenance)
              << " scale=" << format_float(pd.scale_applied) << " d=(";
    for (size_t j = 0; j < pd.d.size(); ++j) {
      if (j) std::cout << ", ";
      std::cout << format_float(pd.d[j]);
    }
    std::cout << ") |d|=" << format_float(norm2(pd.d)) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"direct search under linear inequality constraints"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run the solver on one problem");
  std::string solve_path, solve_strategy = "full", solve_trace;
  double solve_alpha0 = -1.0;
  int solve_budget = -1;
  long solve_seed = 0;
  solve->add_option("problem", solve_path, "problem JSON file")->required();
  solve->add_option("--strategy", solve_strategy, "t | tn | full");
  solve->add_option("--alpha0", solve_alpha0, "initial stepsize");
  solve->add_option("--budget-mult", solve_budget,
                    "evaluation budget multiplier (budget = mult*(n+1))");
  solve->add_option("--seed", solve_seed,
                    "accepted for interface compatibility; the method is "
                    "deterministic");
  solve->add_option("--trace", solve_trace, "write per-iteration CSV trace");

  // bench
  auto* bench = app.add_subcommand("bench", "run the benchmark corpus");
  std::string bench_corpus, bench_out = "bench-out";
  int bench_budget = -1, bench_threads = 0;
  bench->add_option("corpus", bench_corpus, "directory of problem JSON files")
      ->required();
  bench->add_option("--out", bench_out, "output directory");
  bench->add_option("--budget-mult", bench_budget, "budget multiplier");
  bench->add_option("--threads", bench_threads, "worker threads (0 = auto)");

  // profiles
  auto* profiles = app.add_subcommand("profiles", "emit data/performance profiles");
  std::string profiles_dir, profiles_tau = "1e-3,1e-6";
  bool profiles_split = false;
  profiles->add_option("results", profiles_dir, "bench output directory")
      ->required();
  profiles->add_option("--tau", profiles_tau, "comma-separated accuracy levels");
  profiles->add_flag("--split-by-tag", profiles_split,
                     "also emit per-constraint-type profiles");

  // lambda-audit
  auto* audit = app.add_subcommand("lambda-audit",
                                   "recompute per-iteration Lambda estimates");
  std::string audit_problem, audit_trace, audit_out;
  audit->add_option("problem", audit_problem, "problem JSON file")->required();
  audit->add_option("trace", audit_trace, "solve trace CSV")->required();
  audit->add_option("--out", audit_out, "output CSV (default: stdout)");

  // poll-inspect
  auto* inspect = app.add_subcommand("poll-inspect", "print a polling set");
  std::string inspect_problem, inspect_strategy = "full";
  std::vector<double> inspect_x;
  double inspect_alpha = 1.0;
  inspect->add_option("problem", inspect_problem, "problem JSON file")
      ->required();
  inspect->add_option("--x", inspect_x, "base point coordinates")->required();
  inspect->add_option("--alpha", inspect_alpha, "stepsize")->required();
  inspect->add_option("--strategy", inspect_strategy, "t | tn | full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed())
      return cmd_solve(solve_path, solve_strategy, solve_alpha0, solve_budget,
                       solve_trace);
    if (bench->parsed())
      return cmd_bench(bench_corpus, bench_out, bench_budget, bench_threads);
    if (profiles->parsed())
      return cmd_profiles(profiles_dir, profiles_tau, profiles_split);
    if (audit->parsed())
      return cmd_lambda_audit(audit_problem, audit_trace, audit_out);
    if (inspect->parsed())
      return cmd_poll_inspect(inspect_problem, inspect_x, inspect_alpha,
                              inspect_strategy);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
