#include "fracpc/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "fracpc/systems.hpp"

namespace fracpc {

namespace {

constexpr std::size_t kMaxStack = 64;

struct FunctionInfo {
  std::string_view name;
  Expr::Op op;
  std::size_t arity;
};

constexpr std::array<FunctionInfo, 7> kFunctions = {{
    {"sin", Expr::Op::sin, 1},
    {"cos", Expr::Op::cos, 1},
    {"exp", Expr::Op::exp, 1},
    {"abs", Expr::Op::abs, 1},
    {"min", Expr::Op::min, 2},
    {"max", Expr::Op::max, 2},
    {"g_pw", Expr::Op::g_pw, 3},
}};

int stack_effect(Expr::Op op) {
  switch (op) {
    case Expr::Op::constant:
    case Expr::Op::time:
    case Expr::Op::state:
      return 1;
    case Expr::Op::neg:
    case Expr::Op::sin:
    case Expr::Op::cos:
    case Expr::Op::exp:
    case Expr::Op::abs:
      return 0;
    case Expr::Op::g_pw:
      return -2;
    default:
      return -1;
  }
}

}  // namespace

class ExprParser {
 public:
  ExprParser(std::string_view text, std::size_t dim) : text_(text), dim_(dim) {}

  Expr run() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty expression");
    parse_sum();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    out_.source_ = std::string(text_);
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ExprError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ExprError(what, at);
  }

  void emit(Expr::Op op, double value = 0.0, std::size_t index = 0) {
    out_.code_.push_back({op, value, index});
    depth_ += stack_effect(op);
    if (depth_ > static_cast<long>(kMaxStack)) fail("expression nests too deeply");
    out_.max_depth_ = std::max(out_.max_depth_, static_cast<std::size_t>(depth_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  void parse_sum() {
    parse_product();
    for (;;) {
      if (accept('+')) {
        parse_product();
        emit(Expr::Op::add);
      } else if (accept('-')) {
        parse_product();
        emit(Expr::Op::sub);
      } else {
        return;
      }
    }
  }

  void parse_product() {
    parse_unary();
    for (;;) {
      if (accept('*')) {
        parse_unary();
        emit(Expr::Op::mul);
      } else if (accept('/')) {
        parse_unary();
        emit(Expr::Op::div);
      } else {
        return;
      }
    }
  }

  void parse_unary() {
    if (accept('-')) {
      parse_unary();
      emit(Expr::Op::neg);
      return;
    }
    if (accept('+')) {
      parse_unary();
      return;
    }
    parse_power();
  }

  void parse_power() {
    parse_atom();
    if (accept('^')) {
      parse_unary();
      emit(Expr::Op::pow);
    }
  }

  void parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      parse_sum();
      expect(')');
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      parse_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      parse_name();
      return;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  void parse_number() {
    const std::size_t start = pos_;
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc()) fail("malformed number");
    pos_ = static_cast<std::size_t>(end - text_.data());
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
                                text_[pos_] == '_')) {
      fail_at("malformed number", start);
    }
    emit(Expr::Op::constant, value);
  }

  void parse_name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);

    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      parse_call(name, start);
      return;
    }
    if (name == "t") {
      emit(Expr::Op::time);
      return;
    }
    if (name == "pi") {
      emit(Expr::Op::constant, std::numbers::pi);
      return;
    }
    if (name.size() >= 2 && name[0] == 'y') {
      std::size_t index = 0;
      const auto [end, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec == std::errc() && end == name.data() + name.size() && index >= 1 && index <= dim_ &&
          name[1] != '0') {
        emit(Expr::Op::state, 0.0, index - 1);
        return;
      }
    }
    for (const FunctionInfo& fn : kFunctions) {
      if (fn.name == name) fail_at("function '" + std::string(name) + "' needs arguments", start);
    }
    fail_at("unknown identifier '" + std::string(name) + "'", start);
  }

  void parse_call(std::string_view name, std::size_t start) {
    const FunctionInfo* info = nullptr;
    for (const FunctionInfo& fn : kFunctions) {
      if (fn.name == name) info = &fn;
    }
    if (info == nullptr) fail_at("unknown function '" + std::string(name) + "'", start);

    expect('(');
    std::size_t args = 0;
    if (!accept(')')) {
      do {
        parse_sum();
        ++args;
      } while (accept(','));
      expect(')');
    }
    if (args != info->arity) {
      fail_at("arity mismatch: '" + std::string(name) + "' takes " + std::to_string(info->arity) +
                  " argument(s), got " + std::to_string(args),
              start);
    }
    emit(info->op);
  }

  std::string_view text_;
  std::size_t dim_;
  std::size_t pos_ = 0;
  long depth_ = 0;
  Expr out_;
};

Expr Expr::parse(std::string_view text, std::size_t dim) { return ExprParser(text, dim).run(); }

template <class Real>
Real Expr::eval(Real t, std::span<const Real> y) const {
  std::array<Real, kMaxStack> stack;
  std::size_t top = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::constant:
        stack[top++] = static_cast<Real>(in.value);
        break;
      case Op::time:
        stack[top++] = t;
        break;
      case Op::state:
        stack[top++] = y[in.index];
        break;
      case Op::neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::add:
        --top;
        stack[top - 1] = stack[top - 1] + stack[top];
        break;
      case Op::sub:
        --top;
        stack[top - 1] = stack[top - 1] - stack[top];
        break;
      case Op::mul:
        --top;
        stack[top - 1] = stack[top - 1] * stack[top];
        break;
      case Op::div:
        --top;
        stack[top - 1] = stack[top - 1] / stack[top];
        break;
      case Op::pow:
        --top;
        stack[top - 1] = std::pow(stack[top - 1], stack[top]);
        break;
      case Op::sin:
        stack[top - 1] = std::sin(stack[top - 1]);
        break;
      case Op::cos:
        stack[top - 1] = std::cos(stack[top - 1]);
        break;
      case Op::exp:
        stack[top - 1] = std::exp(stack[top - 1]);
        break;
      case Op::abs:
        stack[top - 1] = std::abs(stack[top - 1]);
        break;
      case Op::min:
        --top;
        stack[top - 1] = std::min(stack[top - 1], stack[top]);
        break;
      case Op::max:
        --top;
        stack[top - 1] = std::max(stack[top - 1], stack[top]);
        break;
      case Op::g_pw:
        top -= 2;
        stack[top - 1] = g_piecewise<Real>(stack[top - 1], stack[top], stack[top + 1]);
        break;
    }
  }
  return stack[0];
}

template double Expr::eval<double>(double, std::span<const double>) const;
template long double Expr::eval<long double>(long double, std::span<const long double>) const;

RhsExpr parse_rhs(std::span<const std::string> sources) {
  std::vector<Expr> parsed;
  parsed.reserve(sources.size());
  for (const std::string& src : sources) parsed.push_back(Expr::parse(src, sources.size()));
  return RhsExpr(std::move(parsed));
}

}  // namespace fracpc
