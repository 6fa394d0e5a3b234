#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracpc {

/// Right-hand side f(t, y) of D^alpha y = f(t, y). Writes dim() values into dy.
template <class Real>
using RhsFn = std::function<void(Real t, std::span<const Real> y, std::span<Real> dy)>;

/// Thrown for inputs that violate a Problem or plan invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a step produces inf/NaN. last_valid() is the index of the
/// last grid point whose state was finite.
class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(std::size_t last_valid, std::size_t component)
      : std::runtime_error("non-finite state at step " + std::to_string(last_valid + 1) +
                           " (component " + std::to_string(component + 1) +
                           "); last valid step " + std::to_string(last_valid)),
        last_valid_(last_valid),
        component_(component) {}

  std::size_t last_valid() const noexcept { return last_valid_; }
  std::size_t component() const noexcept { return component_; }

 private:
  std::size_t last_valid_;
  std::size_t component_;
};

/// D^{alpha_i} y_i = f_i(t, y), y_i^{(k)}(0) = init[i][k] for k < ceil(alpha_i),
/// solved on [0, horizon] with `steps` uniform steps.
template <class Real>
struct Problem {
  std::vector<double> orders;
  std::vector<std::vector<Real>> init;
  RhsFn<Real> rhs;
  double horizon = 1.0;
  std::size_t steps = 1;

  std::size_t dim() const noexcept { return orders.size(); }
  Real step_size() const { return static_cast<Real>(horizon) / static_cast<Real>(steps); }

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// ceil(alpha) as a count of initial values.
std::size_t initial_value_count(double alpha);

/// Solution on the uniform grid t_n = n T / N. Row-major (N+1) x d matrices.
template <class Real>
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::size_t dim, std::vector<Real> times, std::vector<Real> states,
             std::vector<Real> rhs_values, std::vector<Real> predicted = {})
      : dim_(dim),
        times_(std::move(times)),
        states_(std::move(states)),
        rhs_values_(std::move(rhs_values)),
        predicted_(std::move(predicted)) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return times_.size(); }
  std::size_t steps() const noexcept { return times_.empty() ? 0 : times_.size() - 1; }

  const std::vector<Real>& times() const noexcept { return times_; }
  const std::vector<Real>& states() const noexcept { return states_; }
  const std::vector<Real>& rhs_values() const noexcept { return rhs_values_; }

  std::span<const Real> state(std::size_t n) const {
    return {states_.data() + n * dim_, dim_};
  }
  std::span<const Real> rhs_value(std::size_t n) const {
    return {rhs_values_.data() + n * dim_, dim_};
  }
  bool has_predicted() const noexcept { return !predicted_.empty(); }
  /// y^P_n; row 0 repeats the initial state.
  std::span<const Real> predicted(std::size_t n) const {
    return {predicted_.data() + n * dim_, dim_};
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Real> times_;
  std::vector<Real> states_;
  std::vector<Real> rhs_values_;
  std::vector<Real> predicted_;
};

struct SolveOptions {
  bool keep_predicted = false;
};

extern template struct Problem<double>;
extern template struct Problem<long double>;

}  // namespace fracpc
