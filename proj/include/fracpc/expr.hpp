#pragma once

// Minimal arithmetic expression language for user-defined right-hand sides.
//
//   expr    := sum
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := atom ('^' unary)?          right-associative, binds tightest
//   atom    := number | name | name '(' args ')' | '(' expr ')'
//
// Names: t, y1..yd, pi. Functions: sin cos exp abs (1 arg), min max (2),
// g_pw(x, a, b) (the piecewise-linear LCR nonlinearity).
// Note -x^2 parses as -(x^2).

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fracpc {

class ExprError : public std::invalid_argument {
 public:
  ExprError(const std::string& message, std::size_t position)
      : std::invalid_argument(message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// One compiled expression: a postfix program over a value stack.
class Expr {
 public:
  enum class Op : unsigned char {
    constant, time, state, neg, add, sub, mul, div, pow,
    sin, cos, exp, abs, min, max, g_pw,
  };
  struct Instr {
    Op op;
    double value = 0.0;      // constant
    std::size_t index = 0;   // state component (0-based)
  };

  /// Parses text over variables t, y1..y{dim}.
  static Expr parse(std::string_view text, std::size_t dim);

  template <class Real>
  Real eval(Real t, std::span<const Real> y) const;

  const std::string& source() const noexcept { return source_; }
  std::size_t max_depth() const noexcept { return max_depth_; }

 private:
  std::string source_;
  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;

  friend class ExprParser;
};

/// A system of expressions, one per component.
class RhsExpr {
 public:
  RhsExpr() = default;
  explicit RhsExpr(std::vector<Expr> components) : components_(std::move(components)) {}

  std::size_t dim() const noexcept { return components_.size(); }
  const Expr& component(std::size_t i) const { return components_[i]; }

  template <class Real>
  void eval(Real t, std::span<const Real> y, std::span<Real> dy) const {
    for (std::size_t i = 0; i < components_.size(); ++i) dy[i] = components_[i].eval(t, y);
  }

 private:
  std::vector<Expr> components_;
};

/// Parses one expression per component; component i may reference y1..y{n}.
RhsExpr parse_rhs(std::span<const std::string> sources);

extern template double Expr::eval<double>(double, std::span<const double>) const;
extern template long double Expr::eval<long double>(long double, std::span<const long double>) const;

}  // namespace fracpc
