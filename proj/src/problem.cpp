#include "fracpc/problem.hpp"

#include <cmath>

namespace fracpc {

std::size_t initial_value_count(double alpha) {
  return static_cast<std::size_t>(std::ceil(alpha));
}

template <class Real>
void Problem<Real>::validate() const {
  if (orders.empty()) throw ValidationError("orders: need at least one component");
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const double alpha = orders[i];
    if (!(alpha > 0.0) || alpha > 2.0) {
      throw ValidationError("orders[" + std::to_string(i) + "]: alpha=" + std::to_string(alpha) +
                            " outside (0, 2]");
    }
  }
  if (init.size() != orders.size()) {
    throw ValidationError("init: expected " + std::to_string(orders.size()) +
                          " components, got " + std::to_string(init.size()));
  }
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const std::size_t want = initial_value_count(orders[i]);
    if (init[i].size() != want) {
      throw ValidationError("init[" + std::to_string(i) + "]: order " +
                            std::to_string(orders[i]) + " needs " + std::to_string(want) +
                            " initial values, got " + std::to_string(init[i].size()));
    }
    for (const Real v : init[i]) {
      if (!std::isfinite(static_cast<long double>(v))) {
        throw ValidationError("init[" + std::to_string(i) + "]: non-finite value");
      }
    }
  }
  if (!rhs) throw ValidationError("rhs: missing right-hand side");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ValidationError("horizon: must be a finite T > 0");
  }
  if (steps == 0) throw ValidationError("steps: must be >= 1");
}

template struct Problem<double>;
template struct Problem<long double>;

}  // namespace fracpc
