#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dsopt/matrix.hpp"

namespace dsopt {

/// Arithmetic expression over variables x_1..x_n: constants, variables, and
/// calls over {+, -, *, /, pow, exp, log, sin, cos, abs, min, max}.
/// +, *, min, max are variadic; "-" and "/" are binary ("-" also unary).
class Expression {
 public:
  enum class Kind { Constant, Variable, Call };
  enum class Op { Add, Sub, Mul, Div, Pow, Exp, Log, Sin, Cos, Abs, Min, Max };

  static Expression constant(double v);
  static Expression variable(int index);  // 0-based
  static Expression call(Op op, std::vector<Expression> args);

  double eval(const Vec& x) const;
  int max_variable_index() const;  // -1 when no variables appear

  Kind kind() const { return kind_; }

 private:
  Kind kind_ = Kind::Constant;
  double value_ = 0.0;
  int var_index_ = 0;
  Op op_ = Op::Add;
  std::vector<Expression> args_;
};

}  // namespace dsopt
