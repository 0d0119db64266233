#include "dsopt/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dsopt/errors.hpp"

namespace dsopt {

namespace {

using nlohmann::json;

Expression parse_expr(const json& j, const std::string& origin) {
  if (j.is_number()) return Expression::constant(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.size() >= 2 && s[0] == 'x') {
      try {
        const int idx = std::stoi(s.substr(1));
        if (idx >= 1) return Expression::variable(idx - 1);
      } catch (...) {
      }
    }
    throw ParseError(origin + ": bad variable reference '" + s + "'");
  }
  if (!j.is_object() || !j.contains("op") || !j.contains("args"))
    throw ParseError(origin + ": expression must be number, \"x<k>\" or {op,args}");
  const std::string op = j.at("op").get<std::string>();
  std::vector<Expression> args;
  if (!j.at("args").is_array())
    throw ParseError(origin + ": expression args must be an array");
  for (const auto& a : j.at("args")) args.push_back(parse_expr(a, origin));

  using Op = Expression::Op;
  Op code;
  if (op == "+" || op == "add") code = Op::Add;
  else if (op == "-" || op == "sub" || op == "neg") code = Op::Sub;
  else if (op == "*" || op == "mul") code = Op::Mul;
  else if (op == "/" || op == "div") code = Op::Div;
  else if (op == "pow") code = Op::Pow;
  else if (op == "exp") code = Op::Exp;
  else if (op == "log") code = Op::Log;
  else if (op == "sin") code = Op::Sin;
  else if (op == "cos") code = Op::Cos;
  else if (op == "abs") code = Op::Abs;
  else if (op == "min") code = Op::Min;
  else if (op == "max") code = Op::Max;
  else throw ParseError(origin + ": unknown op '" + op + "'");
  try {
    return Expression::call(code, std::move(args));
  } catch (const ParseError& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

Vec parse_vec(const json& j, int n, const std::string& origin,
              const std::string& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ParseError(origin + ": field '" + field + "' must be an array of length " +
                     std::to_string(n));
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_number())
      throw ParseError(origin + ": field '" + field + "' has a non-numeric entry");
    v[i] = j[i].get<double>();
  }
  return v;
}

}  // namespace

Expression parse_expression_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("expression: ") + e.what());
  }
  return parse_expr(j, "expression");
}

LoadedProblem parse_problem_json(const std::string& text,
                                 const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(origin + ": top level must be an object");
  for (const char* field : {"name", "n", "objective", "x0"})
    if (!j.contains(field))
      throw ParseError(origin + ": missing field '" + field + "'");

  const std::string name = j.at("name").get<std::string>();
  const int n = j.at("n").get<int>();
  if (n < 1) throw ParseError(origin + ": n must be >= 1");

  const Expression expr = parse_expr(j.at("objective"), origin + ":objective");
  if (expr.max_variable_index() >= n)
    throw ParseError(origin + ": objective references x" +
                     std::to_string(expr.max_variable_index() + 1) +
                     " but n = " + std::to_string(n));

  std::vector<Vec> rows;
  Vec rhs;
  bool has_general_row = false;
  if (j.contains("constraints")) {
    if (!j.at("constraints").is_array())
      throw ParseError(origin + ": 'constraints' must be an array");
    for (const auto& c : j.at("constraints")) {
      if (!c.is_object() || !c.contains("a") || !c.contains("b"))
        throw ParseError(origin + ": each constraint needs fields 'a' and 'b'");
      Vec a = parse_vec(c.at("a"), n, origin, "constraints.a");
      if (!c.at("b").is_number())
        throw ParseError(origin + ": constraint 'b' must be a number");
      int nz = 0;
      for (double v : a)
        if (v != 0.0) ++nz;
      if (nz > 1) has_general_row = true;
      rows.push_back(std::move(a));
      rhs.push_back(c.at("b").get<double>());
    }
  }
  if (j.contains("bounds")) {
    const auto& b = j.at("bounds");
    if (!b.is_object())
      throw ParseError(origin + ": 'bounds' must be an object");
    auto parse_bound = [&](const char* which, double sign) {
      if (!b.contains(which)) return;
      const auto& arr = b.at(which);
      if (!arr.is_array() || static_cast<int>(arr.size()) != n)
        throw ParseError(origin + ": bounds arrays must have length n");
      for (int i = 0; i < n; ++i) {
        if (arr[i].is_null()) continue;
        if (!arr[i].is_number())
          throw ParseError(origin + ": bound entries must be numbers or null");
        const double v = arr[i].get<double>();
        if (!std::isfinite(v)) continue;
        Vec row(n, 0.0);
        row[i] = sign;
        rows.push_back(std::move(row));
        rhs.push_back(sign * v);
      }
    };
    parse_bound("upper", 1.0);
    parse_bound("lower", -1.0);
  }

  Polyhedron omega = [&]() {
    try {
      return Polyhedron(n, std::move(rows), std::move(rhs));
    } catch (const EmptyDomain& e) {
      throw InfeasibleProblem(origin + ": " + e.what());
    }
  }();

  Vec x0 = parse_vec(j.at("x0"), n, origin, "x0");

  LoadedProblem out{
      ProblemInstance{name,
                      [expr](const Vec& x) { return expr.eval(x); },
                      std::move(omega),
                      {},
                      {},
                      nullptr},
      {},
      false};

  if (!out.instance.omega.is_feasible(x0)) {
    try {
      x0 = out.instance.omega.project(x0);
    } catch (const NoConvergence& e) {
      throw InfeasibleProblem(origin + ": start-point projection failed: " +
                              e.what());
    }
    if (!out.instance.omega.is_feasible(x0, 1e-8))
      throw InfeasibleProblem(origin + ": projected start point is infeasible");
    out.x0_was_projected = true;
  }
  out.instance.x0 = std::move(x0);

  if (j.contains("f_ref")) {
    if (!j.at("f_ref").is_number())
      throw ParseError(origin + ": 'f_ref' must be a number");
    out.instance.f_ref = j.at("f_ref").get<double>();
  }
  if (j.contains("tags")) {
    if (!j.at("tags").is_array())
      throw ParseError(origin + ": 'tags' must be an array");
    for (const auto& t : j.at("tags")) out.tags.push_back(t.get<std::string>());
  }
  if (out.tags.empty())
    out.tags.push_back(has_general_row ? "linear-inequality"
                                       : "bound-constrained");

  const double f0 = out.instance.objective(out.instance.x0);
  if (!std::isfinite(f0))
    throw ParseError(origin + ": objective is not finite at the start point");
  return out;
}

LoadedProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem_json(buf.str(), path);
}

}  // namespace dsopt
