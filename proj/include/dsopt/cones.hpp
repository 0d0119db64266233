#pragma once

#include <vector>

#include "dsopt/matrix.hpp"
#include "dsopt/polyhedron.hpp"

namespace dsopt {

enum class ConeSource {
  FullRankFormula,
  DoubleDescription,
  ActiveNormals,
  Empty,
};

/// Finite description of a polyhedral cone: cone(generators) + the linear
/// span of the lineality basis (each lineality vector contributes +/-u).
struct ConeGenerators {
  std::vector<Vec> generators;
  std::vector<Vec> lineality;  // mutually orthonormal
  ConeSource source = ConeSource::Empty;

  bool trivial() const { return generators.empty() && lineality.empty(); }
};

/// N(x,alpha) = cone({a_i : i nearly active}); generators are the raw rows.
ConeGenerators normal_cone_generators(const Vec& x, double alpha,
                                      const Polyhedron& omega);

/// Tangent-cone generators for a full-column-rank active matrix A (n x q):
/// the q vectors -(A^+)^T e_i (unscaled) plus an orthonormal basis of
/// col(A)^perp as lineality pairs. Throws RankDeficient.
ConeGenerators tangent_generators_fullrank(const Matrix& active_columns);

/// Generators of { y : a_i^T y <= 0 for all rows } by incremental double
/// description; handles arbitrary rank. Returns source Empty when the cone
/// is {0}. Rays are unit, deduplicated, lexicographically sorted.
ConeGenerators tangent_generators_dd(const std::vector<Vec>& active_rows,
                                     int dimension);

/// y in cone(generators u +/-lineality)? Decided by a phase-I LP.
bool cone_member(const Vec& y, const ConeGenerators& g);

}  // namespace dsopt
