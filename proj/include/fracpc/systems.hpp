#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fracpc/expr.hpp"
#include "fracpc/problem.hpp"

namespace fracpc {

/// Forced series LCR circuit (normalized):
///   D^a1 x = y - g(x)
///   D^a2 y = -sigma y - x + f sin(omega t)
struct LcrParams {
  double sigma = 1.015;
  double f = 0.0;
  double omega = 0.55;
  double a = -1.02;
  double b = -0.58;

  /// Throws ValidationError when sigma/omega are not positive, f < 0 or 1 + sigma b == 0.
  void validate() const;
};

struct EquilibriumSet {
  std::array<double, 2> e0{0.0, 0.0};
  std::array<double, 2> e_plus{};
  std::array<double, 2> e_minus{};
};

/// bx - a + b for x <= -1, ax for |x| < 1, bx + a - b for x >= 1.
/// The breakpoints take the outer branches; both sides agree there.
template <class Real>
constexpr Real g_piecewise(Real x, Real a, Real b) {
  if (x <= Real(-1)) return b * x - a + b;
  if (x >= Real(1)) return b * x + a - b;
  return a * x;
}

template <class Real>
void lcr_rhs(Real t, std::span<const Real> y, std::span<Real> dy, const LcrParams& p) {
  const Real sigma = static_cast<Real>(p.sigma);
  dy[0] = y[1] - g_piecewise<Real>(y[0], static_cast<Real>(p.a), static_cast<Real>(p.b));
  dy[1] = -sigma * y[1] - y[0] +
          static_cast<Real>(p.f) * std::sin(static_cast<Real>(p.omega) * t);
}

template <class Real>
constexpr Real linear_rhs(Real /*t*/, Real y, Real lambda) {
  return lambda * y;
}

/// E0 = (0,0), E+- = +-(sigma (a-b), b-a) / (1 + sigma b). Throws
/// ValidationError for a vanishing denominator.
EquilibriumSet equilibria(const LcrParams& params);

/// Width-agnostic description of a right-hand side; instantiates an RhsFn
/// for either floating-point width from the same parameters.
class System {
 public:
  struct Linear {
    double lambda;
    std::size_t dim;
  };

  static System linear(double lambda, std::size_t dim = 1);
  static System lcr(const LcrParams& params);
  static System expression(RhsExpr expr);

  std::size_t dim() const noexcept;
  std::string describe() const;

  const LcrParams* lcr_params() const noexcept { return std::get_if<LcrParams>(&impl_); }
  /// Copy with a different LCR forcing amplitude; throws for non-LCR systems.
  System with_forcing(double f) const;

  template <class Real>
  RhsFn<Real> rhs() const;

 private:
  using Impl = std::variant<Linear, LcrParams, std::shared_ptr<const RhsExpr>>;
  explicit System(Impl impl) : impl_(std::move(impl)) {}
  Impl impl_;
};

/// A problem with double-valued inputs that can be instantiated at any
/// supported width, so different-precision runs start from identical data.
struct ProblemSpec {
  System system = System::linear(-1.0);
  std::vector<double> orders;
  std::vector<std::vector<double>> init;
  double horizon = 1.0;
  std::size_t steps = 1;

  template <class Real>
  Problem<Real> instantiate() const;
};

extern template RhsFn<double> System::rhs<double>() const;
extern template RhsFn<long double> System::rhs<long double>() const;
extern template Problem<double> ProblemSpec::instantiate<double>() const;
extern template Problem<long double> ProblemSpec::instantiate<long double>() const;

}  // namespace fracpc
