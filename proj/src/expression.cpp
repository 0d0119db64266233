#include "dsopt/expression.hpp"

#include <cmath>
#include <limits>

#include "dsopt/errors.hpp"

namespace dsopt {

Expression Expression::constant(double v) {
  Expression e;
  e.kind_ = Kind::Constant;
  e.value_ = v;
  return e;
}

Expression Expression::variable(int index) {
  Expression e;
  e.kind_ = Kind::Variable;
  e.var_index_ = index;
  return e;
}

Expression Expression::call(Op op, std::vector<Expression> args) {
  const size_t k = args.size();
  switch (op) {
    case Op::Add:
    case Op::Mul:
    case Op::Min:
    case Op::Max:
      if (k < 1) throw ParseError("expression: variadic op needs arguments");
      break;
    case Op::Sub:
      if (k != 1 && k != 2) throw ParseError("expression: '-' takes 1 or 2 arguments");
      break;
    case Op::Div:
    case Op::Pow:
      if (k != 2) throw ParseError("expression: binary op takes 2 arguments");
      break;
    case Op::Exp:
    case Op::Log:
    case Op::Sin:
    case Op::Cos:
    case Op::Abs:
      if (k != 1) throw ParseError("expression: unary op takes 1 argument");
      break;
  }
  Expression e;
  e.kind_ = Kind::Call;
  e.op_ = op;
  e.args_ = std::move(args);
  return e;
}

double Expression::eval(const Vec& x) const {
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::Variable:
      if (var_index_ < 0 || var_index_ >= static_cast<int>(x.size()))
        throw DimensionMismatch("expression: variable index out of range");
      return x[var_index_];
    case Kind::Call:
      break;
  }
  switch (op_) {
    case Op::Add: {
      double acc = 0.0;
      for (const auto& a : args_) acc += a.eval(x);
      return acc;
    }
    case Op::Sub:
      return args_.size() == 1 ? -args_[0].eval(x)
                               : args_[0].eval(x) - args_[1].eval(x);
    case Op::Mul: {
      double acc = 1.0;
      for (const auto& a : args_) acc *= a.eval(x);
      return acc;
    }
    case Op::Div:
      return args_[0].eval(x) / args_[1].eval(x);
    case Op::Pow:
      return std::pow(args_[0].eval(x), args_[1].eval(x));
    case Op::Exp:
      return std::exp(args_[0].eval(x));
    case Op::Log:
      return std::log(args_[0].eval(x));
    case Op::Sin:
      return std::sin(args_[0].eval(x));
    case Op::Cos:
      return std::cos(args_[0].eval(x));
    case Op::Abs:
      return std::fabs(args_[0].eval(x));
    case Op::Min: {
      double acc = std::numeric_limits<double>::infinity();
      for (const auto& a : args_) acc = std::min(acc, a.eval(x));
      return acc;
    }
    case Op::Max: {
      double acc = -std::numeric_limits<double>::infinity();
      for (const auto& a : args_) acc = std::max(acc, a.eval(x));
      return acc;
    }
  }
  return 0.0;
}

int Expression::max_variable_index() const {
  switch (kind_) {
    case Kind::Constant:
      return -1;
    case Kind::Variable:
      return var_index_;
    case Kind::Call: {
      int m = -1;
      for (const auto& a : args_) m = std::max(m, a.max_variable_index());
      return m;
    }
  }
  return -1;
}

}  // namespace dsopt
