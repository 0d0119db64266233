#include <doctest.h>

#include <cmath>
#include <random>

#include "dsopt/cones.hpp"
#include "dsopt/numerics.hpp"
#include "dsopt/polyhedron.hpp"

using namespace dsopt;

namespace {

Vec random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    Vec v(n);
    for (auto& x : v) x = g(rng);
    const double vn = norm2(v);
    if (vn > 1e-6) {
      scale_in_place(v, 1.0 / vn);
      return v;
    }
  }
}

bool in_halfspace_cone(const std::vector<Vec>& rows, const Vec& y) {
  for (const auto& a : rows)
    if (dot(a, y) > 1e-9 * std::max(1.0, norm2(a))) return false;
  return true;
}

}  // namespace

TEST_CASE("normal cone generators") {
  SUBCASE("interior point, tiny alpha") {
    const Polyhedron omega(2, {{1.0, 1.0}}, {1.0});
    const ConeGenerators g = normal_cone_generators({0.0, 0.0}, 1e-6, omega);
    CHECK(g.source == ConeSource::Empty);
    CHECK(g.generators.empty());
  }
  SUBCASE("near-vertex point with both rows active") {
    const double eps1 = 1e-3, eps2 = 2e-3;
    const Polyhedron omega(2, {{-1.0, 0.0}, {1.0, 1.0}}, {0.0, 1.0});
    const ConeGenerators g =
        normal_cone_generators({eps1, 1.0 - eps2}, 0.5, omega);
    REQUIRE(g.generators.size() == 2);
    CHECK(g.generators[0][0] == doctest::Approx(-1.0));
    CHECK(g.generators[0][1] == doctest::Approx(0.0));
    CHECK(g.generators[1][0] == doctest::Approx(1.0));
    CHECK(g.generators[1][1] == doctest::Approx(1.0));
  }
  SUBCASE("all four rows of the 2d region") {
    const Polyhedron omega(2, {{-1.0, 0.0}, {0.0, -1.0}, {4.0, 1.0}, {3.0, 4.0}},
                           {0.0, 0.0, 12.0, 12.0});
    const ConeGenerators g = normal_cone_generators({0.23, 2.55}, 3.4, omega);
    CHECK(g.generators.size() == 4);
  }
}

TEST_CASE("full-rank tangent generators") {
  SUBCASE("halfspace x1 <= b") {
    Matrix a(2, 1);
    a(0, 0) = 1.0;
    const ConeGenerators g = tangent_generators_fullrank(a);
    REQUIRE(g.generators.size() == 1);
    CHECK(g.generators[0][0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(g.generators[0][1] == doctest::Approx(0.0));
    REQUIRE(g.lineality.size() == 1);
    CHECK(std::fabs(g.lineality[0][0]) <= 1e-12);
  }
  SUBCASE("near-vertex active matrix gives the rotated generators") {
    // columns a1 = (-1,0), a2 = (1,1); dhat1 = (1,-1), dhat2 = (0,-1)
    Matrix a(2, 2);
    a(0, 0) = -1.0;
    a(1, 0) = 0.0;
    a(0, 1) = 1.0;
    a(1, 1) = 1.0;
    const ConeGenerators g = tangent_generators_fullrank(a);
    REQUIRE(g.generators.size() == 2);
    CHECK(g.generators[0][0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g.generators[0][1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(g.generators[1][0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(g.generators[1][1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(g.lineality.empty());
  }
  SUBCASE("identity active matrix gives -e_i") {
    const ConeGenerators g = tangent_generators_fullrank(Matrix::identity(3));
    REQUIRE(g.generators.size() == 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(g.generators[i][j] ==
              doctest::Approx(i == j ? -1.0 : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("orthogonality law of the full-rank generators") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const int q = 1 + static_cast<int>(rng() % n);
    Matrix a(n, q);
    for (auto& v : a.a) v = u(rng);
    const Svd s = svd(a);
    if (!is_full_column_rank(s) || s.sigma.back() < 0.05 * s.sigma.front())
      continue;
    const ConeGenerators g = tangent_generators_fullrank(a);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        const double ip = dot(g.generators[i], a.column(j));
        if (i == j)
          CHECK(ip < 0.0);
        else
          CHECK(std::fabs(ip) <= 1e-10);
      }
  }
}

TEST_CASE("double description examples") {
  SUBCASE("single row gives one ray and one lineality direction") {
    const ConeGenerators g = tangent_generators_dd({{-1.0, 0.0}}, 2);
    REQUIRE(g.generators.size() == 1);
    CHECK(g.generators[0][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.generators[0][1] == doctest::Approx(0.0));
    REQUIRE(g.lineality.size() == 1);
    CHECK(std::fabs(g.lineality[0][0]) <= 1e-12);
    CHECK(g.source == ConeSource::DoubleDescription);
  }
  SUBCASE("the 2d region rows give the trivial cone") {
    const ConeGenerators g = tangent_generators_dd(
        {{-1.0, 0.0}, {0.0, -1.0}, {4.0, 1.0}, {3.0, 4.0}}, 2);
    CHECK(g.source == ConeSource::Empty);
    CHECK(g.trivial());
  }
  SUBCASE("no rows gives all of R^n as lineality") {
    const ConeGenerators g = tangent_generators_dd({}, 3);
    CHECK(g.generators.empty());
    CHECK(g.lineality.size() == 3);
  }
  SUBCASE("opposite rows collapse a coordinate into lineality") {
    const ConeGenerators g =
        tangent_generators_dd({{1.0, 0.0}, {-1.0, 0.0}}, 2);
    CHECK(g.generators.empty());
    REQUIRE(g.lineality.size() == 1);
    CHECK(std::fabs(g.lineality[0][0]) <= 1e-12);
  }
}

TEST_CASE("cone membership basics") {
  const ConeGenerators g = tangent_generators_dd({{-1.0, 0.0}, {0.0, -1.0}}, 2);
  // cone {y >= 0}
  REQUIRE(g.generators.size() == 2);
  CHECK(cone_member(g.generators[0], g));
  CHECK(cone_member(add(g.generators[0], g.generators[1]), g));
  CHECK(!cone_member(scaled(g.generators[0], -1.0), g));
}

TEST_CASE("polar property: sampled membership equals halfspace test") {
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int disagreements = 0;
  for (int instance = 0; instance < 50; ++instance) {
    const int n = 2 + static_cast<int>(rng() % 3);  // 2..4
    const int m = 1 + static_cast<int>(rng() % 5);  // 1..5 rows
    std::vector<Vec> rows;
    for (int i = 0; i < m; ++i) {
      Vec a(n);
      for (auto& v : a) v = u(rng);
      if (norm2(a) < 1e-3) a[0] = 1.0;
      rows.push_back(std::move(a));
    }
    const ConeGenerators g = tangent_generators_dd(rows, n);
    for (int sample = 0; sample < 1000; ++sample) {
      const Vec y = random_unit(rng, n);
      const bool in_h = in_halfspace_cone(rows, y);
      const bool in_g = cone_member(y, g);
      if (in_h != in_g) ++disagreements;
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("full-rank and double-description generators span the same cone") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int q = 1 + static_cast<int>(rng() % n);
    Matrix a(n, q);
    for (auto& v : a.a) v = u(rng);
    const Svd s = svd(a);
    if (!is_full_column_rank(s) || s.sigma.back() < 0.1 * s.sigma.front())
      continue;
    std::vector<Vec> rows;
    for (int j = 0; j < q; ++j) rows.push_back(a.column(j));
    const ConeGenerators fr = tangent_generators_fullrank(a);
    const ConeGenerators dd = tangent_generators_dd(rows, n);
    for (const auto& gen : fr.generators) CHECK(cone_member(gen, dd));
    for (const auto& gen : dd.generators) CHECK(cone_member(gen, fr));
    for (const auto& lin : fr.lineality) {
      CHECK(cone_member(lin, dd));
      CHECK(cone_member(scaled(lin, -1.0), dd));
    }
    for (const auto& lin : dd.lineality) {
      CHECK(cone_member(lin, fr));
      CHECK(cone_member(scaled(lin, -1.0), fr));
    }
  }
}
