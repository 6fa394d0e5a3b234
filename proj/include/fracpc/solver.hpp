#pragma once

// Fractional Adams-Bashforth-Moulton predictor-corrector (sequential core).
//
// For each component with order a, step size h and history f_0..f_n:
//
//   y^P_{n+1} = T(t_{n+1}) + h^a sum_{k=0}^{n} b_{n-k} f_k
//   y_{n+1}   = T(t_{n+1}) + h^a ( c_n f_0 + sum_{k=1}^{n} a_{n-k} f_k
//                                  + f(t_{n+1}, y^P_{n+1}) / G(a+2) )
//
// where T is the Taylor polynomial of the initial data. The parallel engine
// reuses Scheme and only changes how the history sums are split.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fracpc/problem.hpp"
#include "fracpc/weights.hpp"

namespace fracpc {

/// Half-open index window [lo, hi).
struct IndexRange {
  std::size_t lo = 0;
  std::size_t hi = 0;

  std::size_t size() const noexcept { return hi > lo ? hi - lo : 0; }
  bool empty() const noexcept { return hi <= lo; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Append-only store of rhs values, one contiguous row per component.
/// Capacity is fixed up front so rows never move while workers read them.
template <class Real>
class History {
 public:
  History(std::size_t dim, std::size_t capacity);

  std::size_t dim() const noexcept { return rows_.size(); }
  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return capacity_; }
  const Real* row(std::size_t component) const noexcept { return rows_[component].data(); }
  std::span<const Real> component(std::size_t i) const { return {rows_[i].data(), size_}; }

  void append(std::span<const Real> f);

 private:
  std::vector<std::vector<Real>> rows_;
  std::size_t size_ = 0;
  std::size_t capacity_ = 0;
};

/// Predictor and corrector history sums of rows sharing one weight table,
/// restricted to k in chunk (clamped to [0, n]):
///   sp[j] = sum_k b_{n-k} f_j[k]
///   sc[j] = [0 in chunk] c_n f_j[0] + sum_{k>=1} a_{n-k} f_j[k]
template <class Real>
void history_sums(const WeightTable<Real>& weights, std::size_t n, IndexRange chunk,
                  std::span<const Real* const> rows, std::span<Real> sp, std::span<Real> sc);

/// sum_{k < ceil(alpha)} t^k / k! * init[k]
template <class Real>
Real taylor_term(Real t, std::span<const Real> init, double alpha);

/// Single-component predictor: taylor + h^a sum_{k=0}^{n} b_{n-k} f_k.
template <class Real>
Real predictor_step(std::size_t n, std::span<const Real> rhs_history,
                    const WeightTable<Real>& weights, Real h, Real taylor);

/// Single-component corrector; rhs_at_predicted is f(t_{n+1}, y^P_{n+1}).
template <class Real>
Real corrector_step(std::size_t n, std::span<const Real> rhs_history, Real rhs_at_predicted,
                    const WeightTable<Real>& weights, Real h, Real taylor);

/// Per-problem state of the scheme: weight tables (one per distinct order,
/// shared by the components using it), h^a per component and the initial
/// data. Read-only once constructed, so workers may call chunk_sums
/// concurrently.
template <class Real>
class Scheme {
 public:
  explicit Scheme(const Problem<Real>& problem);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t steps() const noexcept { return steps_; }
  Real time(std::size_t n) const;
  const WeightTable<Real>& table(std::size_t component) const { return *tables_[component]; }
  std::size_t distinct_tables() const noexcept { return groups_.size(); }

  std::span<const Real> initial_state() const noexcept { return y0_; }

  /// History sums of every component over chunk at step n (sp, sc sized dim()).
  void chunk_sums(IndexRange chunk, std::size_t n, const History<Real>& history,
                  std::span<Real> sp, std::span<Real> sc) const;

  /// From reduced sums at step n, produces y^P_{n+1}, f(y^P), y_{n+1} and
  /// f_{n+1}. Throws NonFiniteState when y_{n+1} or f_{n+1} is not finite.
  void finish_step(std::size_t n, std::span<const Real> sp, std::span<const Real> sc,
                   std::span<Real> y_pred, std::span<Real> f_pred, std::span<Real> y_next,
                   std::span<Real> f_next) const;

  void initial_rhs(std::span<Real> f0) const;

 private:
  struct Group {
    std::shared_ptr<const WeightTable<Real>> table;
    std::vector<std::size_t> components;
  };

  std::size_t dim_;
  std::size_t steps_;
  double horizon_;
  RhsFn<Real> rhs_;
  std::vector<double> orders_;
  std::vector<std::vector<Real>> init_;
  std::vector<Real> y0_;
  std::vector<Real> h_alpha_;
  std::vector<std::shared_ptr<const WeightTable<Real>>> tables_;
  std::vector<Group> groups_;
};

/// Reference solver: one history sum over [0, n] per step.
template <class Real>
Trajectory<Real> solve_sequential(const Problem<Real>& problem, const SolveOptions& options = {});

/// Shared output assembly for the sequential and parallel drivers.
template <class Real>
class TrajectoryBuilder {
 public:
  TrajectoryBuilder(const Scheme<Real>& scheme, bool keep_predicted);

  void set_initial(std::span<const Real> y0, std::span<const Real> f0);
  void set_step(std::size_t n, std::span<const Real> y_pred, std::span<const Real> y,
                std::span<const Real> f);
  Trajectory<Real> finish() &&;

 private:
  std::size_t dim_;
  bool keep_predicted_;
  std::vector<Real> times_, states_, rhs_, predicted_;
};

}  // namespace fracpc
