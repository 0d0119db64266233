#include "dsopt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include "dsopt/errors.hpp"

namespace dsopt {

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

BenchResults run_benchmark(const std::vector<LoadedProblem>& corpus,
                           const std::vector<PollStrategy>& variants,
                           const SolverConfig& config, int max_threads) {
  if (variants.empty())
    throw std::invalid_argument("run_benchmark: no variants given");
  if (corpus.empty())
    throw std::invalid_argument("run_benchmark: empty corpus");

  struct Job {
    const LoadedProblem* problem;
    PollStrategy strategy;
  };
  std::vector<Job> jobs;
  for (const auto& p : corpus)
    for (PollStrategy s : variants) jobs.push_back({&p, s});

  auto run_one = [&config](const Job& job) {
    BenchRun out;
    out.problem = job.problem->instance.name;
    out.tag = job.problem->tags.empty() ? "" : job.problem->tags.front();
    out.n = job.problem->instance.omega.dimension();
    out.strategy = job.strategy;
    try {
      SolverConfig cfg = config;
      cfg.strategy = job.strategy;
      const SolverRun run = direct_search(job.problem->instance, cfg);
      out.f0 = run.best_f_by_eval.front();
      out.best_f = run.best_f_by_eval.back();
      out.eval_count = run.eval_count;
      out.termination = run.termination;
      out.best_f_by_eval = run.best_f_by_eval;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    return out;
  };

  unsigned threads = max_threads > 0 ? static_cast<unsigned>(max_threads)
                                     : std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = std::min<unsigned>(threads, jobs.size());

  BenchResults results;
  results.runs.resize(jobs.size());
  if (threads <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i) results.runs[i] = run_one(jobs[i]);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        for (;;) {
          const size_t i = next.fetch_add(1);
          if (i >= jobs.size()) return;
          results.runs[i] = run_one(jobs[i]);
        }
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& p : corpus) results.problems.push_back(p.instance.name);
  return results;
}

int solved_after(const Vec& best_f_by_eval, double f_min, double f0,
                 double tau) {
  const double target = f_min + tau * (f0 - f_min);
  for (size_t e = 0; e < best_f_by_eval.size(); ++e)
    if (best_f_by_eval[e] <= target) return static_cast<int>(e) + 1;
  return kNeverSolved;
}

namespace {

struct SolveCounts {
  // per problem: f_min over variants, then N(S,P,tau) per variant
  std::vector<std::string> variants;
  std::vector<std::string> problems;
  std::vector<int> problem_n;
  // counts[v][p]
  std::vector<std::vector<int>> counts;
};

SolveCounts solve_counts(const BenchResults& results, double tau) {
  SolveCounts sc;
  std::map<std::string, size_t> variant_index;
  std::map<std::string, size_t> problem_index;
  for (const auto& run : results.runs) {
    const std::string v = to_string(run.strategy);
    if (!variant_index.count(v)) {
      variant_index[v] = sc.variants.size();
      sc.variants.push_back(v);
    }
    if (!problem_index.count(run.problem)) {
      problem_index[run.problem] = sc.problems.size();
      sc.problems.push_back(run.problem);
      sc.problem_n.push_back(run.n);
    }
  }
  // f_min per problem = best feasible value over all variants
  std::vector<double> f_min(sc.problems.size(),
                            std::numeric_limits<double>::infinity());
  std::vector<double> f0(sc.problems.size(),
                         std::numeric_limits<double>::quiet_NaN());
  for (const auto& run : results.runs) {
    if (!run.error.empty()) continue;
    const size_t p = problem_index.at(run.problem);
    f_min[p] = std::min(f_min[p], run.best_f);
    f0[p] = run.f0;
  }
  sc.counts.assign(sc.variants.size(),
                   std::vector<int>(sc.problems.size(), kNeverSolved));
  for (const auto& run : results.runs) {
    if (!run.error.empty()) continue;
    const size_t v = variant_index.at(to_string(run.strategy));
    const size_t p = problem_index.at(run.problem);
    if (!std::isfinite(f_min[p])) continue;
    sc.counts[v][p] = solved_after(run.best_f_by_eval, f_min[p], f0[p], tau);
  }
  return sc;
}

ProfileCurve step_curve(const std::string& variant, double tau,
                        std::vector<double> xs, int total) {
  // xs are the per-problem solve abscissae (may repeat); build the monotone
  // step function of the fraction solved by x.
  std::sort(xs.begin(), xs.end());
  ProfileCurve curve;
  curve.variant = variant;
  curve.tau = tau;
  curve.points.push_back({0.0, 0.0});
  size_t i = 0;
  while (i < xs.size()) {
    size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    curve.points.push_back(
        {xs[i], static_cast<double>(j) / static_cast<double>(total)});
    i = j;
  }
  return curve;
}

}  // namespace

ProfileTable data_profile(const BenchResults& results, double tau) {
  const SolveCounts sc = solve_counts(results, tau);
  ProfileTable table;
  table.total_problems = static_cast<int>(sc.problems.size());
  for (size_t v = 0; v < sc.variants.size(); ++v) {
    std::vector<double> xs;
    for (size_t p = 0; p < sc.problems.size(); ++p) {
      const int count = sc.counts[v][p];
      if (count == kNeverSolved) continue;
      xs.push_back(static_cast<double>(count) /
                   static_cast<double>(sc.problem_n[p] + 1));
    }
    table.curves.push_back(
        step_curve(sc.variants[v], tau, std::move(xs), table.total_problems));
  }
  return table;
}

ProfileTable performance_profile(const BenchResults& results, double tau) {
  const SolveCounts sc = solve_counts(results, tau);
  ProfileTable table;
  table.total_problems = static_cast<int>(sc.problems.size());
  std::vector<int> best(sc.problems.size(), kNeverSolved);
  for (size_t p = 0; p < sc.problems.size(); ++p)
    for (size_t v = 0; v < sc.variants.size(); ++v)
      best[p] = std::min(best[p], sc.counts[v][p]);
  for (size_t v = 0; v < sc.variants.size(); ++v) {
    std::vector<double> xs;
    for (size_t p = 0; p < sc.problems.size(); ++p) {
      if (sc.counts[v][p] == kNeverSolved || best[p] == kNeverSolved) continue;
      xs.push_back(static_cast<double>(sc.counts[v][p]) /
                   static_cast<double>(best[p]));
    }
    table.curves.push_back(
        step_curve(sc.variants[v], tau, std::move(xs), table.total_problems));
  }
  return table;
}

std::string profile_csv(const ProfileTable& table) {
  std::ostringstream out;
  out << "variant,tau,x,proportion\n";
  for (const auto& curve : table.curves)
    for (const auto& pt : curve.points)
      out << curve.variant << ',' << format_float(curve.tau) << ','
          << format_float(pt.x) << ',' << format_float(pt.proportion) << '\n';
  return out.str();
}

std::string profile_svg(const ProfileTable& table, const std::string& title,
                        const std::string& x_label) {
  const int width = 640, height = 480;
  const int ml = 60, mr = 160, mt = 40, mb = 50;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  double x_max = 1.0;
  for (const auto& c : table.curves)
    for (const auto& p : c.points) x_max = std::max(x_max, p.x);

  auto fx = [&](double x) { return ml + (x / x_max) * plot_w; };
  auto fy = [&](double y) { return mt + (1.0 - y) * plot_h; };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return std::string(buf);
  };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  // axes
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\""
      << ml + plot_w << "\" y2=\"" << mt + plot_h
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + plot_h << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double yv = i / 5.0;
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << num(fy(yv) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(yv) << "</text>\n";
    const double xv = x_max * i / 5.0;
    svg << "<text x=\"" << num(fx(xv)) << "\" y=\"" << mt + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(xv) << "</text>\n";
  }
  svg << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << mt + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << mt + plot_h / 2 << ")\">proportion solved</text>\n";

  int ci = 0;
  for (const auto& curve : table.curves) {
    const char* color = colors[ci % 6];
    std::ostringstream path;
    double last_y = 0.0;
    path << "M " << num(fx(0)) << ' ' << num(fy(0));
    for (const auto& p : curve.points) {
      path << " L " << num(fx(p.x)) << ' ' << num(fy(last_y));
      path << " L " << num(fx(p.x)) << ' ' << num(fy(p.proportion));
      last_y = p.proportion;
    }
    path << " L " << num(fx(x_max)) << ' ' << num(fy(last_y));
    svg << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\"/>\n";
    svg << "<line x1=\"" << ml + plot_w + 10 << "\" y1=\"" << mt + 14 + 18 * ci
        << "\" x2=\"" << ml + plot_w + 34 << "\" y2=\"" << mt + 14 + 18 * ci
        << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
    svg << "<text x=\"" << ml + plot_w + 40 << "\" y=\"" << mt + 18 + 18 * ci
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << curve.variant
        << "</text>\n";
    ++ci;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace dsopt
