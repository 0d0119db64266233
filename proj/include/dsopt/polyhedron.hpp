#pragma once

#include <optional>
#include <vector>

#include "dsopt/matrix.hpp"

namespace dsopt {

/// Per-coordinate view of a polyhedron whose rows are all single-coordinate
/// bounds; entries may be +/-infinity.
struct BoundStructure {
  Vec lower;
  Vec upper;
};

/// Nearly-active constraint indices at (x, alpha):
/// I(x,alpha) = { i : b_i - alpha*||a_i||^2 <= a_i^T x }.
struct ActiveSet {
  std::vector<int> indices;  // sorted
  Vec x;
  double alpha = 0.0;
};

/// Omega = { x : a_i^T x <= b_i }. Immutable after construction. Rows with
/// a_i = 0 and b_i >= 0 are dropped; a_i = 0 with b_i < 0 throws EmptyDomain.
class Polyhedron {
 public:
  Polyhedron(int dimension, std::vector<Vec> rows, Vec rhs);

  static Polyhedron unconstrained(int dimension);
  /// Box l <= x <= u (infinite entries allowed). Emits one row per finite bound.
  static Polyhedron box(const Vec& lower, const Vec& upper);

  int dimension() const { return n_; }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  const std::vector<Vec>& rows() const { return rows_; }
  const Vec& rhs() const { return rhs_; }
  double row_norm2sq(int i) const { return row_norm2sq_[i]; }
  const std::optional<BoundStructure>& bound_structure() const {
    return bounds_;
  }

  /// a_i^T x <= b_i + tol for every row. tol < 0 selects the default
  /// per-row tolerance 1e-12 * max(1, |b_i|).
  bool is_feasible(const Vec& x, double tol = -1.0) const;

  /// s_i = b_i - a_i^T x (negative slacks returned as-is).
  Vec slacks(const Vec& x) const;

  ActiveSet nearly_active(const Vec& x, double alpha) const;

  /// Largest t in [0, cap] with x + t*u feasible:
  /// min(cap, min over {i : a_i^T u > 0} of s_i / (a_i^T u)), clipped at 0.
  double max_feasible_scale(const Vec& x, const Vec& u, double cap) const;

  /// Euclidean projection onto Omega. Boxes project by clipping; the general
  /// case runs Dykstra's alternating projections over the halfspaces.
  Vec project(const Vec& z, double tol = 1e-10, int max_iter = 10000) const;

 private:
  void check_dim(const Vec& x, const char* who) const;

  int n_;
  std::vector<Vec> rows_;
  Vec rhs_;
  Vec row_norm2sq_;
  std::optional<BoundStructure> bounds_;
};

}  // namespace dsopt
