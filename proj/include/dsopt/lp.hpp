#pragma once

#include <vector>

#include "dsopt/matrix.hpp"

namespace dsopt {

/// min c^T x  s.t.  E x = r,  x >= 0.
struct StandardLP {
  Vec objective;   // length p
  Matrix equality; // m x p
  Vec rhs;         // length m
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  double value = 0.0;  // valid when Optimal
  Vec solution;        // valid when Optimal
  Vec duals;           // valid when Optimal (one per equality row)
};

/// Primal simplex, Bland's anti-cycling rule throughout, phase I with
/// artificial variables, dense basis inverse refactorized every 50 pivots.
LPResult solve_lp(const StandardLP& lp);

/// min ||c||_1 over { c >= 0 : sum_i c_i d_i = v }, i.e. the inner problem of
/// the Lambda-PSS definition. Infeasible exactly when v is outside cone(D).
LPResult min_l1_decomposition(const std::vector<Vec>& directions, const Vec& v);

}  // namespace dsopt
