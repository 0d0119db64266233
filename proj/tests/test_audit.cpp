#include <doctest.h>

#include <cmath>
#include <random>

#include "dsopt/audit.hpp"
#include "dsopt/lp.hpp"

using namespace dsopt;

namespace {

PollingSet cross_set(int n, double alpha) {
  PollingSet set;
  set.x.assign(n, 0.0);
  set.alpha = alpha;
  for (int i = 0; i < n; ++i) {
    Vec plus(n, 0.0), minus(n, 0.0);
    plus[i] = alpha;
    minus[i] = -alpha;
    set.directions.push_back({minus, Provenance::Tangent, alpha});
    set.directions.push_back({plus, Provenance::Tangent, alpha});
  }
  return set;
}

PollingSet manual_set(Vec x, double alpha, std::vector<Vec> dirs) {
  PollingSet set;
  set.x = std::move(x);
  set.alpha = alpha;
  for (auto& d : dirs)
    set.directions.push_back({std::move(d), Provenance::Tangent, 1.0});
  return set;
}

}  // namespace

TEST_CASE("coordinate cross estimates sqrt(n)") {
  for (int n : {2, 3, 5}) {
    const PollingSet set = cross_set(n, 1.0);
    const LambdaEstimate est =
        estimate_lambda(set, Polyhedron::unconstrained(n));
    CHECK(est.lambda >= std::sqrt(static_cast<double>(n)) - 0.02);
    CHECK(est.lambda <= std::sqrt(static_cast<double>(n)) + 0.02);
    CHECK(est.lower_bound);
    // witness satisfies the estimate exactly (re-solve identity)
    const LPResult inner =
        min_l1_decomposition(set.direction_vectors(), est.witness_v);
    REQUIRE(inner.status == LPStatus::Optimal);
    CHECK(std::fabs(inner.value - est.lambda) <= 1e-9);
  }
}

TEST_CASE("near-vertex normal-augmented set blows up, negatives stay bounded") {
  const double eps1 = 1e-3, eps2 = 2e-3, alpha = 0.01;
  const Polyhedron omega(2, {{-1.0, 0.0}, {1.0, 1.0}}, {0.0, 1.0});
  const Vec x = {eps1, 1.0 - eps2};

  // scaled tangent + scaled normals (the heuristic set)
  const PollingSet with_normals = manual_set(
      x, alpha,
      {{0.0, -alpha},
       {alpha / std::sqrt(2.0), -alpha / std::sqrt(2.0)},
       {-eps1, 0.0},
       {(eps2 - eps1) / 2.0, (eps2 - eps1) / 2.0}});
  const LambdaEstimate blow = estimate_lambda(with_normals, omega);
  CHECK(blow.lambda >= 7.0 - 0.1);

  // scaled tangent + negative tangent (the bounded set)
  const PollingSet with_negatives = manual_set(
      x, alpha,
      {{0.0, -alpha},
       {alpha / std::sqrt(2.0), -alpha / std::sqrt(2.0)},
       {0.0, eps2 - eps1},
       {-eps1, eps1}});
  const LambdaEstimate bounded = estimate_lambda(with_negatives, omega);
  CHECK(bounded.lambda >= 2.0 - 1e-6);
  CHECK(bounded.lambda <= 4.0);
}

TEST_CASE("non-spanning set is reported as +infinity with a witness") {
  const PollingSet set = manual_set({0.0, 0.0}, 1.0, {{1.0, 0.0}});
  const LambdaEstimate est =
      estimate_lambda(set, Polyhedron::unconstrained(2));
  CHECK(std::isinf(est.lambda));
  // the witness is admissible yet not decomposable
  CHECK(norm2(est.witness_v) <= 1.0 + 1e-9);
  const LPResult inner =
      min_l1_decomposition(set.direction_vectors(), est.witness_v);
  CHECK(inner.status == LPStatus::Infeasible);
}

TEST_CASE("estimator is scale covariant") {
  const Polyhedron omega(2, {{1.0, 1.0}}, {1.0});
  PollingSet base;
  base.x = {0.2, 0.2};
  base.alpha = 0.3;
  base.directions.push_back({{0.3, 0.0}, Provenance::Tangent, 1.0});
  base.directions.push_back({{0.0, 0.3}, Provenance::Tangent, 1.0});
  base.directions.push_back({{-0.3, 0.0}, Provenance::Tangent, 1.0});
  base.directions.push_back({{0.0, -0.3}, Provenance::Tangent, 1.0});
  const LambdaEstimate e1 = estimate_lambda(base, omega);

  const double c = 0.5;
  PollingSet scaled_set = base;
  scaled_set.alpha *= c;
  for (auto& pd : scaled_set.directions) scale_in_place(pd.d, c);
  // scale the geometry jointly so the feasible slice scales too
  const Polyhedron omega_scaled(
      2, {{1.0, 1.0}}, {0.4 + c * (1.0 - 0.4)});  // slack scales by c at x
  const LambdaEstimate e2 = estimate_lambda(scaled_set, omega_scaled);
  CHECK(std::fabs(e1.lambda - e2.lambda) <= 1e-6 * std::max(1.0, e1.lambda));
}

TEST_CASE("superset inner decompositions never cost more") {
  const Polyhedron omega = Polyhedron::unconstrained(2);
  const PollingSet small = cross_set(2, 1.0);
  PollingSet big = small;
  big.directions.push_back({{0.7, 0.7}, Provenance::Tangent, 1.0});
  const LambdaEstimate es = estimate_lambda(small, omega);
  const LambdaEstimate eb = estimate_lambda(big, omega);
  // exact inner comparison at the superset's own witness
  const LPResult inner_small =
      min_l1_decomposition(small.direction_vectors(), eb.witness_v);
  const LPResult inner_big =
      min_l1_decomposition(big.direction_vectors(), eb.witness_v);
  REQUIRE(inner_small.status == LPStatus::Optimal);
  REQUIRE(inner_big.status == LPStatus::Optimal);
  CHECK(inner_big.value <= inner_small.value + 1e-9);
  // and the heuristic outer estimates respect the same direction loosely
  CHECK(eb.lambda <= es.lambda + 0.05);
}

TEST_CASE("cosine measure examples") {
  SUBCASE("coordinate cross has cm = 1/sqrt(n)") {
    for (int n : {2, 3, 4}) {
      std::vector<Vec> dirs;
      for (int i = 0; i < n; ++i) {
        Vec plus(n, 0.0), minus(n, 0.0);
        plus[i] = 1.0;
        minus[i] = -1.0;
        dirs.push_back(plus);
        dirs.push_back(minus);
      }
      const CosineMeasure cm = cosine_measure(dirs, CosineMode::Exact);
      CHECK(cm.value ==
            doctest::Approx(1.0 / std::sqrt(static_cast<double>(n)))
                .epsilon(1e-6));
      CHECK(!cm.upper_bound);
    }
  }
  SUBCASE("a single direction has cm = -1") {
    const CosineMeasure cm = cosine_measure({{1.0, 0.0}}, CosineMode::Exact);
    CHECK(cm.value == doctest::Approx(-1.0).epsilon(1e-9));
  }
  SUBCASE("an opposite pair has cm = 0") {
    const CosineMeasure cm =
        cosine_measure({{1.0, 0.0}, {-1.0, 0.0}}, CosineMode::Exact);
    CHECK(std::fabs(cm.value) <= 1e-9);
  }
  SUBCASE("sampled mode upper-bounds the exact value") {
    std::vector<Vec> dirs = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
    const CosineMeasure exact = cosine_measure(dirs, CosineMode::Exact);
    const CosineMeasure sampled = cosine_measure(dirs, CosineMode::Sampled);
    CHECK(sampled.upper_bound);
    CHECK(sampled.value >= exact.value - 1e-12);
    CHECK(sampled.value <= exact.value + 0.01);
  }
}

TEST_CASE("lemma cross-checks") {
  SUBCASE("the unit cross is tight") {
    const PollingSet set = cross_set(2, 1.0);
    const LambdaLemmaReport rep =
        check_lambda_lemmas(set, Polyhedron::unconstrained(2));
    REQUIRE(rep.applicable);
    CHECK(rep.cm == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(rep.d_min == doctest::Approx(1.0));
    CHECK(rep.d_max == doctest::Approx(1.0));
    CHECK(rep.lambda_upper_from_cm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(rep.cm_lower_consistent);
    CHECK(rep.estimate_below_upper);
    CHECK(rep.lambda_estimate == doctest::Approx(std::sqrt(2.0)).epsilon(2e-2));
  }
  SUBCASE("doubling the lengths halves the upper bound") {
    const PollingSet set = cross_set(2, 1.0);
    PollingSet longer = set;
    for (auto& pd : longer.directions) scale_in_place(pd.d, 2.0);
    // directions of length 2*alpha; d_min = 2, Lambda <= sqrt(2)/2
    const LambdaLemmaReport rep =
        check_lambda_lemmas(longer, Polyhedron::unconstrained(2));
    REQUIRE(rep.applicable);
    CHECK(rep.d_min == doctest::Approx(2.0));
    CHECK(rep.lambda_upper_from_cm ==
          doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-6));
    CHECK(rep.estimate_below_upper);
  }
  SUBCASE("a non-spanning set is inapplicable") {
    const PollingSet set = manual_set({0.0, 0.0}, 1.0, {{1.0, 0.0}});
    const LambdaLemmaReport rep =
        check_lambda_lemmas(set, Polyhedron::unconstrained(2));
    CHECK(!rep.applicable);
    CHECK(rep.cm <= 0.0);
    CHECK(std::isinf(rep.lambda_estimate));
  }
}
