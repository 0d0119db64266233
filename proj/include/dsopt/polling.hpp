#pragma once

#include <optional>
#include <vector>

#include "dsopt/cones.hpp"
#include "dsopt/matrix.hpp"
#include "dsopt/polyhedron.hpp"

namespace dsopt {

enum class Provenance { Tangent, NegativeTangent, Normal, Nullspace };

enum class PollStrategy { TangentOnly, TangentPlusNormal, FullLambdaPSS };

enum class ConstructionCase {
  Unconstrained,
  BoundFormula,
  FullRank,
  DoubleDesc,
  NormalGens,
  Recursive,
};

const char* to_string(Provenance p);
const char* to_string(PollStrategy s);
const char* to_string(ConstructionCase c);

struct PollDirection {
  Vec d;                   // the step itself; the solver polls x + d
  Provenance provenance;
  double scale_applied;    // multiplier applied to the source vector
};

/// Ordered polling set for one (x, alpha). Tangent-cone directions (Tangent,
/// then the Nullspace pairs) always precede negative-tangent and normal
/// directions, so opportunistic polling tries the tangent cone first.
struct PollingSet {
  std::vector<PollDirection> directions;
  Vec x;
  double alpha = 0.0;
  PollStrategy strategy = PollStrategy::FullLambdaPSS;
  ConstructionCase construction_case = ConstructionCase::Unconstrained;
  std::optional<double> certified_lambda;
  bool degenerate = false;  // every candidate direction scaled to zero

  std::vector<Vec> direction_vectors() const {
    std::vector<Vec> v;
    v.reserve(directions.size());
    for (const auto& pd : directions) v.push_back(pd.d);
    return v;
  }
};

/// Bound-constraint construction: D = union_i {-alpha_{-i} e_i, alpha_i e_i}
/// with alpha_{-i} = min(alpha, x_i - l_i), alpha_i = min(alpha, u_i - x_i);
/// zero-scaled directions dropped. Carries the certified bound
/// Lambda = min[n, sqrt(n)*alpha / min{alpha, nonzero gaps}].
PollingSet bound_pss(const Vec& x, double alpha, const Polyhedron& omega);

/// Full-rank construction: q tangent directions (alpha/||dhat_i||) dhat_i
/// with dhat_i = -(A^+)^T e_i, their negatives scaled by
/// alpha_i = min(||dhat_i|| s_i / alpha, 1), and +/-alpha u over an
/// orthonormal basis of col(A)^perp. Certified Lambda = q kappa(A) + sqrt(n-q).
/// Throws RankDeficient when the active rows are dependent.
PollingSet fullrank_pss(const Vec& x, double alpha, const Polyhedron& omega,
                        const ActiveSet& active);

/// The practical recursive construction: case 1 (no nearly-active rows),
/// case 2 (independent rows -> fullrank_pss), case 3a (double-description
/// generators and their feasibly scaled negatives), case 3b (scaled normals
/// when T = {0}), case 3c (recursive completion of the unspanned subspace).
PollingSet practical_pss(const Vec& x, double alpha, const Polyhedron& omega);

/// Polling-set variants compared in the benchmark; all share the same
/// tangent-cone block and ordering.
PollingSet strategy_pss(const Vec& x, double alpha, const Polyhedron& omega,
                        PollStrategy strategy);

}  // namespace dsopt
