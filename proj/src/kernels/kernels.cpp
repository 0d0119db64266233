#include "dsopt/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <limits>

namespace dsopt::kernels {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double nrm2sq_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void rot_scalar(double* x, double* y, double c, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = -s * xi + c * yi;
  }
}

double row_dot_max_scalar(const double* rows, std::size_t m, std::size_t n,
                          const double* v) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double d = dot_scalar(rows + i * n, v, n);
    if (d > best) best = d;
  }
  return best;
}

constexpr Table kScalar = {
    "scalar",     dot_scalar, axpy_scalar,        scal_scalar,
    nrm2sq_scalar, rot_scalar, row_dot_max_scalar,
};

const Table* pick_initial() {
  const char* env = std::getenv("DSOPT_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &kScalar;
  const Table* avx2 = avx2_table();
  if (env != nullptr && std::strcmp(env, "avx2") == 0 && avx2 != nullptr)
    return avx2;
  if (env == nullptr && avx2 != nullptr) return avx2;
  return &kScalar;
}

std::atomic<const Table*> g_active{nullptr};

}  // namespace

const Table& scalar_table() { return kScalar; }

#if !DSOPT_HAVE_AVX2_TU
const Table* avx2_table() { return nullptr; }
#endif

const Table& active() {
  const Table* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = pick_initial();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void force(const Table& table) {
  g_active.store(&table, std::memory_order_release);
}

}  // namespace dsopt::kernels
