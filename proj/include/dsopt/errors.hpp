#pragma once

#include <stdexcept>
#include <string>

namespace dsopt {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative routine ran out of iterations; carries the best value reached.
struct NoConvergence : std::runtime_error {
  double best_value;
  NoConvergence(const std::string& what, double best)
      : std::runtime_error(what), best_value(best) {}
};

struct NumericalBreakdown : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Constraint row 0^T x <= b with b < 0: the feasible set is empty.
struct EmptyDomain : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ObjectiveEvaluationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dsopt
