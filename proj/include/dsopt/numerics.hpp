#pragma once

#include <vector>

#include "dsopt/matrix.hpp"

namespace dsopt {

/// Thin SVD A = U diag(sigma) V^T for A with rows >= cols, computed by
/// one-sided Jacobi. Singular values are sorted in decreasing order.
struct Svd {
  Matrix u;   // rows x cols, orthonormal columns (columns with sigma=0 are zero)
  Vec sigma;  // cols, decreasing
  Matrix v;   // cols x cols, orthogonal
};

Svd svd(const Matrix& a);

/// Relative rank decision used across the library: sigma_min <= 1e-10*sigma_max
/// (absolute 1e-14 when sigma_max = 0) means rank-deficient.
bool is_full_column_rank(const Svd& s);

/// Moore-Penrose pseudoinverse of a full-column-rank matrix,
/// (A^T A)^{-1} A^T. Throws RankDeficient otherwise.
Matrix pseudoinverse(const Matrix& a);

/// Orthonormal basis of col(A)^perp for full-column-rank A (n x q, q <= n).
/// Returns n-q vectors; empty when q = n. Throws RankDeficient.
std::vector<Vec> orthonormal_complement(const Matrix& a);

/// Orthonormal basis of the span of the given vectors (rank-revealing
/// Gram-Schmidt; tolerance relative to the largest input norm).
std::vector<Vec> orthonormal_span_basis(const std::vector<Vec>& vs);

/// 2-norm condition number sigma_max/sigma_min of a full-column-rank matrix.
double condition_number(const Matrix& a);

/// Numerical rank with the library-wide relative threshold.
int numerical_rank(const std::vector<Vec>& vs);

/// Dense LU with partial pivoting; solve helper for small square systems.
struct Lu {
  Matrix lu;
  std::vector<int> perm;
  bool singular = false;
};

Lu lu_factor(const Matrix& a, double pivot_tol = 1e-13);
Vec lu_solve(const Lu& f, const Vec& b);
Vec lu_solve_transposed(const Lu& f, const Vec& b);

}  // namespace dsopt
