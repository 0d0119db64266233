#include <doctest.h>

#include <cmath>
#include <random>

#include "dsopt/solver.hpp"

using namespace dsopt;

namespace {

ProblemInstance one_d_example(PollStrategy) {
  return ProblemInstance{"ex3_6",
                         [](const Vec& x) { return -x[0]; },
                         Polyhedron(1, {{1.0}}, {1.1}),
                         {0.0},
                         {},
                         nullptr};
}

SolverConfig example_config(PollStrategy s) {
  SolverConfig c;
  c.strategy = s;
  c.alpha0 = 1.0;
  return c;
}

std::vector<const IterateRecord*> successes(const SolverRun& run) {
  std::vector<const IterateRecord*> out;
  for (const auto& rec : run.iterates)
    if (rec.success) out.push_back(&rec);
  return out;
}

}  // namespace

TEST_CASE("1d example: tangent-only creeps in binary fractions") {
  const ProblemInstance problem = one_d_example(PollStrategy::TangentOnly);
  const SolverRun run =
      direct_search(problem, example_config(PollStrategy::TangentOnly));
  const auto succ = successes(run);
  REQUIRE(succ.size() >= 3);
  CHECK(succ[0]->x[0] == 1.0);      // exact
  CHECK(succ[1]->x[0] == 1.0625);   // 1 + 2^-4, exact
  CHECK(succ[2]->x[0] == 1.09375);  // 1 + 2^-4 + 2^-5, exact
  CHECK(succ[1]->k == 6);
  CHECK(succ[2]->k == 9);
  CHECK(run.termination == Termination::AlphaMin);
  CHECK(run.final_x[0] < 1.1);
}

TEST_CASE("1d example: the full set reaches the bound exactly") {
  const ProblemInstance problem = one_d_example(PollStrategy::FullLambdaPSS);
  const SolverRun run =
      direct_search(problem, example_config(PollStrategy::FullLambdaPSS));
  const auto succ = successes(run);
  REQUIRE(succ.size() >= 2);
  CHECK(succ[0]->x[0] == 1.0);
  CHECK(succ[1]->x[0] == 1.1);  // exact floating-point equality
  CHECK(succ[1]->k == 1);
  CHECK(run.final_x[0] == 1.1);
  CHECK(run.termination == Termination::AlphaMin);
}

TEST_CASE("start at the optimum: zero successes, alpha-min termination") {
  const ProblemInstance problem{"sq",
                                [](const Vec& x) { return norm2sq(x); },
                                Polyhedron::unconstrained(2),
                                {0.0, 0.0},
                                {},
                                nullptr};
  SolverConfig config;
  const SolverRun run = direct_search(problem, config);
  CHECK(successes(run).empty());
  CHECK(run.termination == Termination::AlphaMin);
  CHECK(run.final_x[0] == 0.0);
  CHECK(run.final_x[1] == 0.0);
}

TEST_CASE("alpha discipline and monotone best values") {
  const ProblemInstance problem{
      "rosen1d",
      [](const Vec& x) { return std::pow(1.0 - x[0], 2) + std::sin(x[1]); },
      Polyhedron::box({-2.0, -2.0}, {2.0, 2.0}),
      {-1.5, 1.0},
      {},
      nullptr};
  SolverConfig config;
  const SolverRun run = direct_search(problem, config);
  const double a0 = 0.1 * 1.5;
  double alpha = a0;
  for (const auto& rec : run.iterates) {
    CHECK(rec.alpha == doctest::Approx(alpha).epsilon(1e-15));
    alpha = rec.success ? std::min(config.gamma_inc * alpha, config.alpha_max)
                        : config.gamma_dec * alpha;
  }
  for (size_t e = 1; e < run.best_f_by_eval.size(); ++e)
    CHECK(run.best_f_by_eval[e] <= run.best_f_by_eval[e - 1]);
  CHECK(run.eval_count == static_cast<int>(run.best_f_by_eval.size()));
}

TEST_CASE("budget termination counts evaluations") {
  int calls = 0;
  const ProblemInstance problem{
      "drift",
      [&calls](const Vec& x) {
        ++calls;
        return -x[0];
      },
      Polyhedron::unconstrained(3),
      {0.0, 0.0, 0.0},
      {},
      nullptr};
  SolverConfig config;
  config.budget_multiplier = 5;  // 20 evaluations
  const SolverRun run = direct_search(problem, config);
  CHECK(run.termination == Termination::Budget);
  CHECK(run.eval_count == 20);
  CHECK(calls == 20);
}

TEST_CASE("non-finite objective values are failed poll points, not errors") {
  const ProblemInstance problem{
      "nanny",
      [](const Vec& x) {
        if (x[0] > 0.5) return std::numeric_limits<double>::quiet_NaN();
        return x[0] * x[0];
      },
      Polyhedron::unconstrained(1),
      {0.0},
      {},
      nullptr};
  SolverConfig config;
  const SolverRun run = direct_search(problem, config);
  CHECK(run.termination == Termination::AlphaMin);
  CHECK(run.final_x[0] == 0.0);
}

TEST_CASE("strategies produce identical runs on unconstrained problems") {
  auto make_problem = []() {
    return ProblemInstance{
        "quad",
        [](const Vec& x) {
          return 2.0 * x[0] * x[0] + x[1] * x[1] - 0.3 * x[0] * x[1] + x[0];
        },
        Polyhedron::unconstrained(2),
        {1.3, -0.4},
        {},
        nullptr};
  };
  std::vector<SolverRun> runs;
  for (PollStrategy s : {PollStrategy::TangentOnly,
                         PollStrategy::TangentPlusNormal,
                         PollStrategy::FullLambdaPSS}) {
    SolverConfig c;
    c.strategy = s;
    runs.push_back(direct_search(make_problem(), c));
  }
  for (int v = 1; v < 3; ++v) {
    REQUIRE(runs[v].eval_count == runs[0].eval_count);
    REQUIRE(runs[v].iterates.size() == runs[0].iterates.size());
    for (size_t k = 0; k < runs[0].iterates.size(); ++k) {
      CHECK(runs[v].iterates[k].f == runs[0].iterates[k].f);
      CHECK(runs[v].iterates[k].alpha == runs[0].iterates[k].alpha);
    }
  }
}

TEST_CASE("criticality measure examples") {
  SUBCASE("interior point returns the gradient norm") {
    const Polyhedron omega = Polyhedron::box({-10.0, -10.0}, {10.0, 10.0});
    const Vec g = {3.0, -4.0};
    const PiResult r = criticality_pi({0.0, 0.0}, g, omega);
    CHECK(r.value == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(norm2(r.witness) <= 1.0 + 1e-9);
    CHECK(dot(g, r.witness) == doctest::Approx(-5.0).epsilon(1e-9));
  }
  SUBCASE("solution of the 1d example is critical") {
    const Polyhedron omega(1, {{1.0}}, {1.1});
    const PiResult r = criticality_pi({1.1}, {-1.0}, omega);
    CHECK(r.value <= 1e-9);
  }
  SUBCASE("one step from the bound") {
    const Polyhedron omega(1, {{1.0}}, {1.1});
    const PiResult r = criticality_pi({1.0}, {-1.0}, omega);
    CHECK(r.value == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(r.witness[0] == doctest::Approx(0.1).epsilon(1e-5));
  }
}

TEST_CASE("criticality matches a fine 1d enumeration") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double lo = -2.0 + u(rng);
    const double hi = lo + 0.1 + 2.0 * std::fabs(u(rng));
    const Polyhedron omega(1, {{1.0}, {-1.0}}, {hi, -lo});
    const double span = hi - lo;
    const double x = lo + (0.5 + 0.49 * u(rng)) * span;
    const double g = 3.0 * u(rng);
    // oracle: min over a fine grid of the admissible interval
    const double vlo = std::max(-1.0, lo - x);
    const double vhi = std::min(1.0, hi - x);
    double best = 0.0;
    for (int i = 0; i <= 200000; ++i) {
      const double v = vlo + (vhi - vlo) * i / 200000.0;
      best = std::min(best, g * v);
    }
    const PiResult r = criticality_pi({x}, {g}, omega);
    CHECK(std::fabs(r.value - (-best)) <= 1e-5 * std::max(1.0, std::fabs(g)));
  }
}

TEST_CASE("complexity check trivial cases") {
  const ProblemInstance problem{
      "halfsq",
      [](const Vec& x) { return 0.5 * norm2sq(x); },
      Polyhedron::unconstrained(2),
      {1.0, 0.0},
      {},
      [](const Vec& x) { return x; }};
  SolverConfig config;
  config.alpha0 = 1.0;
  config.alpha_max = 1.0;
  config.alpha_min = 1e-9;
  config.budget_multiplier = 100000;

  SUBCASE("target already met at the start point") {
    const ComplexityCheck c =
        empirical_complexity_check(problem, config, 2.0, 1.0, 0.0);
    CHECK(c.observed_iterations == 0);
    CHECK(c.within_bound);
  }
  SUBCASE("bound holds at a modest accuracy") {
    const ComplexityCheck c =
        empirical_complexity_check(problem, config, 1e-2, 1.0, 0.0);
    CHECK(c.reached_target);
    CHECK(c.within_bound);
    CHECK(static_cast<double>(c.observed_iterations) <= c.bound);
  }
  SUBCASE("the bound grows by 4x when eps halves") {
    const ComplexityCheck c1 =
        empirical_complexity_check(problem, config, 1e-2, 1.0, 0.0);
    const ComplexityCheck c2 =
        empirical_complexity_check(problem, config, 5e-3, 1.0, 0.0);
    // alpha_min halves, the alpha_min^-2 term quadruples (log term aside)
    CHECK(c2.bound > 3.5 * c1.bound);
  }
}
