#pragma once

#include <string>
#include <vector>

#include "dsopt/expression.hpp"
#include "dsopt/solver.hpp"

namespace dsopt {

/// Parsed problem file plus the derived instance. Tags classify the
/// constraint structure: "bound-constrained" or "linear-inequality".
struct LoadedProblem {
  ProblemInstance instance;
  std::vector<std::string> tags;
  bool x0_was_projected = false;
};

/// Load a problem JSON document:
///   { "name": str, "n": int, "objective": expr,
///     "constraints": [{"a": [...], "b": num}, ...],   (optional)
///     "bounds": {"lower": [...|null], "upper": [...|null]},  (optional)
///     "x0": [...], "f_ref": num (optional), "tags": [str,...] (optional) }
/// Expressions are numbers, "x<k>" variable strings, or
/// {"op": "+", "args": [...]}. Infeasible start points are replaced by their
/// projection onto the constraint set.
LoadedProblem load_problem(const std::string& path);
LoadedProblem parse_problem_json(const std::string& text,
                                 const std::string& origin);

Expression parse_expression_json(const std::string& text);

}  // namespace dsopt
