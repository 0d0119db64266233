#pragma once

#include <cstddef>

// Low-level dense kernels with a scalar reference implementation and an
// AVX2/FMA variant selected once at runtime. All higher-level numerics go
// through this table so the two paths stay interchangeable and testable
// against each other. Selection can be forced with DSOPT_KERNELS=scalar|avx2.

namespace dsopt::kernels {

struct Table {
  const char* name;
  // sum_i x[i]*y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x *= a
  void (*scal)(double a, double* x, std::size_t n);
  // sum_i x[i]^2
  double (*nrm2sq)(const double* x, std::size_t n);
  // plane rotation of two vectors: (x, y) <- (c*x + s*y, -s*x + c*y)
  void (*rot)(double* x, double* y, double c, double s, std::size_t n);
  // max over rows of dot(row_i, v); rows is m x n row-major, m >= 1
  double (*row_dot_max)(const double* rows, std::size_t m, std::size_t n,
                        const double* v);
};

const Table& scalar_table();
// nullptr when AVX2 is unavailable (not compiled in or not supported by CPU).
const Table* avx2_table();
// Table chosen at process start (env override honored).
const Table& active();
// Test hook: override the active table for the rest of the process.
void force(const Table& table);

}  // namespace dsopt::kernels
