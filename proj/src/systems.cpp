#include "fracpc/systems.hpp"

#include <sstream>
#include <stdexcept>

namespace fracpc {

void LcrParams::validate() const {
  if (!(sigma > 0.0)) throw ValidationError("sigma: must be > 0");
  if (!(omega > 0.0)) throw ValidationError("omega: must be > 0");
  if (!(f >= 0.0)) throw ValidationError("f: must be >= 0");
  if (1.0 + sigma * b == 0.0) throw ValidationError("b: 1 + sigma*b must be nonzero");
}

EquilibriumSet equilibria(const LcrParams& p) {
  const double denom = 1.0 + p.sigma * p.b;
  if (denom == 0.0) {
    throw ValidationError("equilibria: degenerate denominator 1 + sigma*b = 0");
  }
  EquilibriumSet eq;
  eq.e_plus = {p.sigma * (p.a - p.b) / denom, (p.b - p.a) / denom};
  eq.e_minus = {-eq.e_plus[0], -eq.e_plus[1]};
  return eq;
}

System System::linear(double lambda, std::size_t dim) {
  if (dim == 0) throw ValidationError("dim: linear system needs at least one component");
  return System(Linear{lambda, dim});
}

System System::lcr(const LcrParams& params) {
  params.validate();
  return System(params);
}

System System::expression(RhsExpr expr) {
  if (expr.dim() == 0) throw ValidationError("rhs: expression system needs at least one component");
  return System(std::make_shared<const RhsExpr>(std::move(expr)));
}

std::size_t System::dim() const noexcept {
  if (const auto* lin = std::get_if<Linear>(&impl_)) return lin->dim;
  if (std::holds_alternative<LcrParams>(impl_)) return 2;
  return std::get<std::shared_ptr<const RhsExpr>>(impl_)->dim();
}

std::string System::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* lin = std::get_if<Linear>(&impl_)) {
    os << "linear(lambda=" << lin->lambda << ", dim=" << lin->dim << ")";
  } else if (const auto* p = std::get_if<LcrParams>(&impl_)) {
    os << "lcr(sigma=" << p->sigma << ", f=" << p->f << ", omega=" << p->omega << ", a=" << p->a
       << ", b=" << p->b << ")";
  } else {
    const auto& expr = *std::get<std::shared_ptr<const RhsExpr>>(impl_);
    os << "expr(";
    for (std::size_t i = 0; i < expr.dim(); ++i) {
      os << (i ? "; " : "") << expr.component(i).source();
    }
    os << ")";
  }
  return os.str();
}

System System::with_forcing(double f) const {
  const auto* p = std::get_if<LcrParams>(&impl_);
  if (p == nullptr) throw ValidationError("system: forcing sweep needs the lcr system");
  LcrParams copy = *p;
  copy.f = f;
  return lcr(copy);
}

template <class Real>
RhsFn<Real> System::rhs() const {
  if (const auto* lin = std::get_if<Linear>(&impl_)) {
    const Real lambda = static_cast<Real>(lin->lambda);
    return [lambda](Real t, std::span<const Real> y, std::span<Real> dy) {
      for (std::size_t i = 0; i < y.size(); ++i) dy[i] = linear_rhs<Real>(t, y[i], lambda);
    };
  }
  if (const auto* p = std::get_if<LcrParams>(&impl_)) {
    const LcrParams params = *p;
    return [params](Real t, std::span<const Real> y, std::span<Real> dy) {
      lcr_rhs<Real>(t, y, dy, params);
    };
  }
  std::shared_ptr<const RhsExpr> expr = std::get<std::shared_ptr<const RhsExpr>>(impl_);
  return [expr](Real t, std::span<const Real> y, std::span<Real> dy) {
    expr->eval<Real>(t, y, dy);
  };
}

template <class Real>
Problem<Real> ProblemSpec::instantiate() const {
  if (orders.size() != system.dim()) {
    throw ValidationError("orders: system has " + std::to_string(system.dim()) +
                          " components, got " + std::to_string(orders.size()) + " orders");
  }
  Problem<Real> p;
  p.orders = orders;
  p.init.reserve(init.size());
  for (const auto& comp : init) p.init.emplace_back(comp.begin(), comp.end());
  p.rhs = system.rhs<Real>();
  p.horizon = horizon;
  p.steps = steps;
  p.validate();
  return p;
}

template RhsFn<double> System::rhs<double>() const;
template RhsFn<long double> System::rhs<long double>() const;
template Problem<double> ProblemSpec::instantiate<double>() const;
template Problem<long double> ProblemSpec::instantiate<long double>() const;

}  // namespace fracpc
