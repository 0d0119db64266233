#pragma once

#include <vector>

#include "dsopt/matrix.hpp"
#include "dsopt/polling.hpp"
#include "dsopt/polyhedron.hpp"

namespace dsopt {

enum class LambdaMethod { DividingRectangles, Multistart };

/// Estimated Lambda for a polling set: the maximum over feasible v in
/// B(0,alpha) of the minimal ell-1 positive-decomposition weight. The outer
/// maximization samples, so the result is a certified LOWER bound on the true
/// Lambda. lambda = +infinity (with the witness) when some feasible v admits
/// no decomposition at all, i.e. the set is not a Lambda-PSS.
struct LambdaEstimate {
  double lambda = 0.0;
  Vec witness_v;
  long inner_lp_calls = 0;
  LambdaMethod method = LambdaMethod::DividingRectangles;
  bool lower_bound = true;
};

LambdaEstimate estimate_lambda(const PollingSet& set, const Polyhedron& omega);

enum class CosineMode { Exact, Sampled };

struct CosineMeasure {
  double value = 0.0;
  bool upper_bound = false;  // sampled mode can only over-estimate cm
};

/// cm(D) = min over unit v of max over d of d^T v / ||d||. Exact mode
/// (n <= 4, |D| <= 12) enumerates equal-cosine candidate minimizers of all
/// n-subsets plus subset-complement directions and refines by sampling;
/// Sampled mode scans 1e5 quasi-random unit vectors.
CosineMeasure cosine_measure(const std::vector<Vec>& directions,
                             CosineMode mode);

/// Cross-checks between the estimated Lambda, the exact/sampled cosine
/// measure, and the two conversion inequalities linking them.
struct LambdaLemmaReport {
  double cm = 0.0;
  double d_min = 0.0;  // min ||d|| / alpha
  double d_max = 0.0;  // max ||d|| / alpha
  double lambda_estimate = 0.0;
  double lambda_upper_from_cm = 0.0;  // 1/(d_min*cm) when cm > 0
  bool cm_lower_consistent = false;   // cm * d_max * lambda_upper >= 1
  bool estimate_below_upper = false;  // estimate <= 1/(d_min*cm) + tol
  bool applicable = false;            // cm > 0
};

LambdaLemmaReport check_lambda_lemmas(const PollingSet& set,
                                      const Polyhedron& omega);

}  // namespace dsopt
