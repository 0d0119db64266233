#include <doctest.h>

#include <cmath>
#include <random>

#include "dsopt/kernels.hpp"

using namespace dsopt;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels basic values") {
  const auto& k = kernels::scalar_table();
  std::vector<double> x = {1.0, 2.0, 3.0};
  std::vector<double> y = {4.0, -5.0, 6.0};
  CHECK(k.dot(x.data(), y.data(), 3) == doctest::Approx(12.0));
  CHECK(k.nrm2sq(x.data(), 3) == doctest::Approx(14.0));
  k.axpy(2.0, x.data(), y.data(), 3);
  CHECK(y[0] == doctest::Approx(6.0));
  CHECK(y[1] == doctest::Approx(-1.0));
  CHECK(y[2] == doctest::Approx(12.0));
  k.scal(0.5, y.data(), 3);
  CHECK(y[2] == doctest::Approx(6.0));
}

TEST_CASE("avx2 kernels match scalar within rounding") {
  const kernels::Table* simd = kernels::avx2_table();
  if (simd == nullptr) return;  // platform without AVX2
  const auto& ref = kernels::scalar_table();
  std::mt19937_64 rng(42);
  for (size_t n : {1u, 3u, 4u, 7u, 16u, 33u, 61u, 257u}) {
    auto x = random_vec(rng, n);
    auto y = random_vec(rng, n);

    const double d0 = ref.dot(x.data(), y.data(), n);
    const double d1 = simd->dot(x.data(), y.data(), n);
    CHECK(std::fabs(d0 - d1) <= 1e-12 * (1.0 + std::fabs(d0)));

    const double s0 = ref.nrm2sq(x.data(), n);
    const double s1 = simd->nrm2sq(x.data(), n);
    CHECK(std::fabs(s0 - s1) <= 1e-12 * (1.0 + s0));

    auto y_ref = y, y_simd = y;
    ref.axpy(0.37, x.data(), y_ref.data(), n);
    simd->axpy(0.37, x.data(), y_simd.data(), n);
    for (size_t i = 0; i < n; ++i)
      CHECK(std::fabs(y_ref[i] - y_simd[i]) <= 1e-13 * (1.0 + std::fabs(y_ref[i])));

    auto a_ref = x, a_simd = x, b_ref = y, b_simd = y;
    const double c = std::cos(0.3), s = std::sin(0.3);
    ref.rot(a_ref.data(), b_ref.data(), c, s, n);
    simd->rot(a_simd.data(), b_simd.data(), c, s, n);
    for (size_t i = 0; i < n; ++i) {
      CHECK(std::fabs(a_ref[i] - a_simd[i]) <= 1e-13 * (1.0 + std::fabs(a_ref[i])));
      CHECK(std::fabs(b_ref[i] - b_simd[i]) <= 1e-13 * (1.0 + std::fabs(b_ref[i])));
    }
  }

  // row_dot_max over a small row-major pack
  for (int trial = 0; trial < 10; ++trial) {
    const size_t m = 5, n = 13;
    auto rows = random_vec(rng, m * n);
    auto v = random_vec(rng, n);
    const double r0 = ref.row_dot_max(rows.data(), m, n, v.data());
    const double r1 = simd->row_dot_max(rows.data(), m, n, v.data());
    CHECK(std::fabs(r0 - r1) <= 1e-12 * (1.0 + std::fabs(r0)));
  }
}

TEST_CASE("active table is one of the implementations") {
  const auto& t = kernels::active();
  CHECK((std::string(t.name) == "scalar" || std::string(t.name) == "avx2"));
}
