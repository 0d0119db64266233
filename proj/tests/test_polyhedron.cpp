#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dsopt/errors.hpp"
#include "dsopt/polyhedron.hpp"

using namespace dsopt;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x1 >= 0, x2 >= 0, x1 + x2 <= 1
Polyhedron simplex2() {
  return Polyhedron(2, {{-1.0, 0.0}, {0.0, -1.0}, {1.0, 1.0}},
                    {0.0, 0.0, 1.0});
}

// x1, x2 >= 0, 4x1 + x2 <= 12, 3x1 + 4x2 <= 12
Polyhedron fig4_region() {
  return Polyhedron(2, {{-1.0, 0.0}, {0.0, -1.0}, {4.0, 1.0}, {3.0, 4.0}},
                    {0.0, 0.0, 12.0, 12.0});
}

}  // namespace

TEST_CASE("feasibility examples") {
  const Polyhedron omega = simplex2();
  CHECK(omega.is_feasible({0.5, 0.5}));
  CHECK(!omega.is_feasible({2.0, 2.0}));
  CHECK(fig4_region().is_feasible({0.23, 2.55}));
}

TEST_CASE("trivial and empty rows at construction") {
  // zero row with nonnegative rhs is dropped
  const Polyhedron ok(2, {{0.0, 0.0}, {1.0, 0.0}}, {0.0, 1.0});
  CHECK(ok.num_constraints() == 1);
  CHECK_THROWS_AS(Polyhedron(2, {{0.0, 0.0}}, {-1.0}), EmptyDomain);
  CHECK_THROWS_AS(ok.is_feasible({1.0}), DimensionMismatch);
}

TEST_CASE("slack examples") {
  SUBCASE("x1 >= 0, x1 + x2 <= 1 near the top vertex") {
    const double eps1 = 1e-3, eps2 = 2e-3;
    const Polyhedron omega(2, {{-1.0, 0.0}, {1.0, 1.0}}, {0.0, 1.0});
    const Vec s = omega.slacks({eps1, 1.0 - eps2});
    CHECK(s[0] == doctest::Approx(eps1).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(eps2 - eps1).epsilon(1e-12));
  }
  SUBCASE("vertex has zero slack on active rows") {
    const Vec s = simplex2().slacks({0.0, 1.0});
    CHECK(s[0] == doctest::Approx(0.0));
    CHECK(s[2] == doctest::Approx(0.0));
  }
  SUBCASE("marked point of the 2d region") {
    const Vec s = fig4_region().slacks({0.23, 2.55});
    CHECK(s[0] == doctest::Approx(0.23).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(2.55).epsilon(1e-12));
    CHECK(s[2] == doctest::Approx(8.53).epsilon(1e-12));
    CHECK(s[3] == doctest::Approx(1.11).epsilon(1e-12));
  }
}

TEST_CASE("nearly active examples") {
  SUBCASE("interior point with tiny alpha") {
    CHECK(simplex2().nearly_active({0.3, 0.3}, 1e-9).indices.empty());
  }
  SUBCASE("all four rows at the marked point with alpha=3.4") {
    const ActiveSet as = fig4_region().nearly_active({0.23, 2.55}, 3.4);
    CHECK(as.indices == std::vector<int>{0, 1, 2, 3});
  }
  SUBCASE("one active bound in the unit box") {
    const Polyhedron box = Polyhedron::box({0.0, 0.0}, {1.0, 1.0});
    const ActiveSet as = box.nearly_active({0.0, 0.5}, 0.25);
    REQUIRE(as.indices.size() == 1);
    // the active row is the lower bound on x1, i.e. -x1 <= 0
    const Vec& row = box.rows()[as.indices[0]];
    CHECK(row[0] == doctest::Approx(-1.0));
    CHECK(row[1] == doctest::Approx(0.0));
  }
}

TEST_CASE("nearly active is monotone in alpha") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Polyhedron omega = fig4_region();
  for (int trial = 0; trial < 100; ++trial) {
    Vec x{3.0 * u(rng), 3.0 * u(rng)};
    if (!omega.is_feasible(x)) continue;
    const double a1 = 0.01 + 2.0 * u(rng);
    const double a2 = a1 + 2.0 * u(rng);
    const auto s1 = omega.nearly_active(x, a1).indices;
    const auto s2 = omega.nearly_active(x, a2).indices;
    for (int i : s1)
      CHECK(std::find(s2.begin(), s2.end(), i) != s2.end());
  }
}

TEST_CASE("max feasible scale examples") {
  const Polyhedron omega(1, {{1.0}}, {1.1});
  CHECK(omega.max_feasible_scale({1.0}, {1.0}, 2.0) ==
        doctest::Approx(0.1).epsilon(1e-12));
  CHECK(omega.max_feasible_scale({1.0}, {-1.0}, 2.0) == doctest::Approx(2.0));
  CHECK(simplex2().max_feasible_scale({0.3, 0.3}, {1.0, 0.3}, 0.0) == 0.0);
}

TEST_CASE("property: ratio test output stays feasible") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Polyhedron omega = fig4_region();
  for (int trial = 0; trial < 200; ++trial) {
    Vec x{1.5 + u(rng), 1.0 + u(rng)};
    if (!omega.is_feasible(x)) continue;
    Vec dir{u(rng), u(rng)};
    if (norm2(dir) < 1e-6) continue;
    const double t = omega.max_feasible_scale(x, dir, 5.0);
    Vec y = x;
    axpy(t, dir, y);
    CHECK(omega.is_feasible(y, 1e-10));
  }
}

TEST_CASE("projection examples") {
  SUBCASE("single violated halfspace matches the closed form") {
    const Vec p = simplex2().project({2.0, 2.0});
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("feasible points are fixed") {
    const Vec p = simplex2().project({0.25, 0.25});
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == doctest::Approx(0.25));
  }
  SUBCASE("boxes clip componentwise exactly") {
    const Polyhedron box = Polyhedron::box({0.0, 0.0}, {1.0, 1.0});
    const Vec p = box.project({-1.0, -1.0});
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 0.0);
  }
}

TEST_CASE("property: projection is idempotent") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const Polyhedron omega = fig4_region();
  for (int trial = 0; trial < 50; ++trial) {
    const Vec z{u(rng), u(rng)};
    const double tol = 1e-10;
    const Vec p1 = omega.project(z, tol);
    const Vec p2 = omega.project(p1, tol);
    CHECK(norm2(sub(p1, p2)) <= 2 * tol + 1e-12);
  }
}

TEST_CASE("dykstra path agrees with clipping on a box plus redundant row") {
  // adding a slack non-bound row disables the clip fast path
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Polyhedron general(2,
                           {{-1.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}, {0.0, 1.0},
                            {1.0, 1.0}},
                           {0.0, 1.0, 0.0, 1.0, 50.0});
  REQUIRE(!general.bound_structure().has_value());
  for (int trial = 0; trial < 25; ++trial) {
    const Vec z{u(rng), u(rng)};
    const Vec p = general.project(z, 1e-11);
    const double cx = std::min(std::max(z[0], 0.0), 1.0);
    const double cy = std::min(std::max(z[1], 0.0), 1.0);
    CHECK(std::fabs(p[0] - cx) <= 1e-9);
    CHECK(std::fabs(p[1] - cy) <= 1e-9);
  }
}

TEST_CASE("bound structure detection") {
  const Polyhedron box = Polyhedron::box({-1.0, -kInf}, {2.0, 3.0});
  REQUIRE(box.bound_structure().has_value());
  CHECK(box.bound_structure()->lower[0] == doctest::Approx(-1.0));
  CHECK(box.bound_structure()->lower[1] == -kInf);
  CHECK(box.bound_structure()->upper[1] == doctest::Approx(3.0));
  CHECK(!simplex2().bound_structure().has_value());
  // scaled single-coordinate rows still count as bounds
  const Polyhedron scaled_row(1, {{2.0}}, {3.0});
  REQUIRE(scaled_row.bound_structure().has_value());
  CHECK(scaled_row.bound_structure()->upper[0] == doctest::Approx(1.5));
}
