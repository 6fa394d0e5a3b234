#include "fracpc/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fracpc/kernels.hpp"

namespace fracpc {

template <class Real>
History<Real>::History(std::size_t dim, std::size_t capacity)
    : rows_(dim, std::vector<Real>(capacity)), capacity_(capacity) {}

template <class Real>
void History<Real>::append(std::span<const Real> f) {
  if (size_ == capacity_) throw std::length_error("history: capacity exhausted");
  for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i][size_] = f[i];
  ++size_;
}

template <class Real>
void history_sums(const WeightTable<Real>& weights, std::size_t n, IndexRange chunk,
                  std::span<const Real* const> rows, std::span<Real> sp, std::span<Real> sc) {
  const std::size_t hi = std::min(chunk.hi, n + 1);
  const std::size_t lo = chunk.lo;
  const std::size_t m = rows.size();
  if (lo >= hi) {
    std::fill_n(sp.begin(), m, Real(0));
    std::fill_n(sc.begin(), m, Real(0));
    return;
  }

  std::size_t k0 = lo;
  if (lo == 0) {
    const Real bn = weights.b(n);
    const Real cn = weights.c(n);
    for (std::size_t j = 0; j < m; ++j) {
      sp[j] = bn * rows[j][0];
      sc[j] = cn * rows[j][0];
    }
    k0 = 1;
  } else {
    std::fill_n(sp.begin(), m, Real(0));
    std::fill_n(sc.begin(), m, Real(0));
  }
  if (k0 >= hi) return;

  // b[n-k] == reversed_b[last - n + k]
  const std::size_t offset = weights.size() - 1 - n + k0;
  const Real* wb = weights.reversed_b().data() + offset;
  const Real* wa = weights.reversed_a().data() + offset;

  constexpr std::size_t kBlock = 8;
  std::array<const Real*, kBlock> shifted{};
  std::array<Real, kBlock> part_p{}, part_c{};
  for (std::size_t j0 = 0; j0 < m; j0 += kBlock) {
    const std::size_t count = std::min(kBlock, m - j0);
    for (std::size_t j = 0; j < count; ++j) shifted[j] = rows[j0 + j] + k0;
    kernels::dual_dot(wb, wa, shifted.data(), count, hi - k0, part_p.data(), part_c.data());
    for (std::size_t j = 0; j < count; ++j) {
      sp[j0 + j] += part_p[j];
      sc[j0 + j] += part_c[j];
    }
  }
}

template <class Real>
Real taylor_term(Real t, std::span<const Real> init, double alpha) {
  const std::size_t terms = initial_value_count(alpha);
  Real sum = 0;
  Real power = 1;  // t^k / k!
  for (std::size_t k = 0; k < terms && k < init.size(); ++k) {
    if (k > 0) power *= t / static_cast<Real>(k);
    sum += power * init[k];
  }
  return sum;
}

template <class Real>
Real predictor_step(std::size_t n, std::span<const Real> rhs_history,
                    const WeightTable<Real>& weights, Real h, Real taylor) {
  if (rhs_history.size() < n + 1) throw std::invalid_argument("predictor_step: history too short");
  const Real* row = rhs_history.data();
  Real sp = 0, sc = 0;
  history_sums<Real>(weights, n, {0, n + 1}, {&row, 1}, {&sp, 1}, {&sc, 1});
  return taylor + std::pow(h, static_cast<Real>(weights.alpha())) * sp;
}

template <class Real>
Real corrector_step(std::size_t n, std::span<const Real> rhs_history, Real rhs_at_predicted,
                    const WeightTable<Real>& weights, Real h, Real taylor) {
  if (rhs_history.size() < n + 1) throw std::invalid_argument("corrector_step: history too short");
  const Real* row = rhs_history.data();
  Real sp = 0, sc = 0;
  history_sums<Real>(weights, n, {0, n + 1}, {&row, 1}, {&sp, 1}, {&sc, 1});
  return taylor + std::pow(h, static_cast<Real>(weights.alpha())) *
                      (sc + rhs_at_predicted * weights.inv_gamma_a2());
}

template <class Real>
Scheme<Real>::Scheme(const Problem<Real>& problem)
    : dim_(problem.dim()),
      steps_(problem.steps),
      horizon_(problem.horizon),
      rhs_(problem.rhs),
      orders_(problem.orders),
      init_(problem.init) {
  problem.validate();

  const Real h = problem.step_size();
  std::map<double, std::size_t> group_of;
  tables_.resize(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double alpha = orders_[i];
    auto [it, inserted] = group_of.try_emplace(alpha, groups_.size());
    if (inserted) {
      groups_.push_back({std::make_shared<const WeightTable<Real>>(alpha, steps_), {}});
    }
    groups_[it->second].components.push_back(i);
    tables_[i] = groups_[it->second].table;
    h_alpha_.push_back(std::pow(h, static_cast<Real>(alpha)));
    y0_.push_back(init_[i][0]);
  }
}

template <class Real>
Real Scheme<Real>::time(std::size_t n) const {
  return static_cast<Real>(n) * static_cast<Real>(horizon_) / static_cast<Real>(steps_);
}

template <class Real>
void Scheme<Real>::chunk_sums(IndexRange chunk, std::size_t n, const History<Real>& history,
                              std::span<Real> sp, std::span<Real> sc) const {
  constexpr std::size_t kBlock = 8;
  std::array<const Real*, kBlock> rows{};
  std::array<Real, kBlock> gp{}, gc{};
  for (const Group& group : groups_) {
    const auto& comps = group.components;
    for (std::size_t j0 = 0; j0 < comps.size(); j0 += kBlock) {
      const std::size_t count = std::min(kBlock, comps.size() - j0);
      for (std::size_t j = 0; j < count; ++j) rows[j] = history.row(comps[j0 + j]);
      history_sums<Real>(*group.table, n, chunk, {rows.data(), count}, {gp.data(), count},
                         {gc.data(), count});
      for (std::size_t j = 0; j < count; ++j) {
        sp[comps[j0 + j]] = gp[j];
        sc[comps[j0 + j]] = gc[j];
      }
    }
  }
}

namespace {

template <class Real>
std::size_t first_non_finite(std::span<const Real> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return i;
  }
  return v.size();
}

}  // namespace

template <class Real>
void Scheme<Real>::initial_rhs(std::span<Real> f0) const {
  rhs_(time(0), y0_, f0);
  if (const std::size_t bad = first_non_finite<Real>(f0); bad < dim_) {
    throw NonFiniteState(0, bad);
  }
}

template <class Real>
void Scheme<Real>::finish_step(std::size_t n, std::span<const Real> sp, std::span<const Real> sc,
                               std::span<Real> y_pred, std::span<Real> f_pred,
                               std::span<Real> y_next, std::span<Real> f_next) const {
  const Real t_next = time(n + 1);
  for (std::size_t i = 0; i < dim_; ++i) {
    const Real taylor = taylor_term<Real>(t_next, init_[i], orders_[i]);
    y_pred[i] = taylor + h_alpha_[i] * sp[i];
  }
  rhs_(t_next, y_pred, f_pred);
  for (std::size_t i = 0; i < dim_; ++i) {
    const Real taylor = taylor_term<Real>(t_next, init_[i], orders_[i]);
    y_next[i] = taylor + h_alpha_[i] * (sc[i] + f_pred[i] * tables_[i]->inv_gamma_a2());
  }
  if (const std::size_t bad = first_non_finite<Real>(y_next); bad < dim_) {
    throw NonFiniteState(n, bad);
  }
  rhs_(t_next, y_next, f_next);
  if (const std::size_t bad = first_non_finite<Real>(f_next); bad < dim_) {
    throw NonFiniteState(n, bad);
  }
}

template <class Real>
TrajectoryBuilder<Real>::TrajectoryBuilder(const Scheme<Real>& scheme, bool keep_predicted)
    : dim_(scheme.dim()), keep_predicted_(keep_predicted) {
  const std::size_t points = scheme.steps() + 1;
  times_.resize(points);
  for (std::size_t n = 0; n < points; ++n) times_[n] = scheme.time(n);
  states_.resize(points * dim_);
  rhs_.resize(points * dim_);
  if (keep_predicted_) predicted_.resize(points * dim_);
}

template <class Real>
void TrajectoryBuilder<Real>::set_initial(std::span<const Real> y0, std::span<const Real> f0) {
  std::copy(y0.begin(), y0.end(), states_.begin());
  std::copy(f0.begin(), f0.end(), rhs_.begin());
  if (keep_predicted_) std::copy(y0.begin(), y0.end(), predicted_.begin());
}

template <class Real>
void TrajectoryBuilder<Real>::set_step(std::size_t n, std::span<const Real> y_pred,
                                       std::span<const Real> y, std::span<const Real> f) {
  const std::size_t at = n * dim_;
  std::copy(y.begin(), y.end(), states_.begin() + at);
  std::copy(f.begin(), f.end(), rhs_.begin() + at);
  if (keep_predicted_) std::copy(y_pred.begin(), y_pred.end(), predicted_.begin() + at);
}

template <class Real>
Trajectory<Real> TrajectoryBuilder<Real>::finish() && {
  return Trajectory<Real>(dim_, std::move(times_), std::move(states_), std::move(rhs_),
                          std::move(predicted_));
}

template <class Real>
Trajectory<Real> solve_sequential(const Problem<Real>& problem, const SolveOptions& options) {
  const Scheme<Real> scheme(problem);
  const std::size_t d = scheme.dim();
  const std::size_t steps = scheme.steps();

  History<Real> history(d, steps + 1);
  TrajectoryBuilder<Real> out(scheme, options.keep_predicted);

  std::vector<Real> f(d), sp(d), sc(d), y_pred(d), f_pred(d), y(d);
  scheme.initial_rhs(f);
  history.append(f);
  out.set_initial(scheme.initial_state(), f);

  for (std::size_t n = 0; n < steps; ++n) {
    scheme.chunk_sums({0, n + 1}, n, history, sp, sc);
    scheme.finish_step(n, sp, sc, y_pred, f_pred, y, f);
    history.append(f);
    out.set_step(n + 1, y_pred, y, f);
  }
  return std::move(out).finish();
}

#define FRACPC_INSTANTIATE(Real)                                                                \
  template class History<Real>;                                                                 \
  template void history_sums<Real>(const WeightTable<Real>&, std::size_t, IndexRange,           \
                                   std::span<const Real* const>, std::span<Real>,               \
                                   std::span<Real>);                                            \
  template Real taylor_term<Real>(Real, std::span<const Real>, double);                          \
  template Real predictor_step<Real>(std::size_t, std::span<const Real>,                        \
                                     const WeightTable<Real>&, Real, Real);                     \
  template Real corrector_step<Real>(std::size_t, std::span<const Real>, Real,                  \
                                     const WeightTable<Real>&, Real, Real);                     \
  template class Scheme<Real>;                                                                  \
  template class TrajectoryBuilder<Real>;                                                       \
  template Trajectory<Real> solve_sequential<Real>(const Problem<Real>&, const SolveOptions&);

FRACPC_INSTANTIATE(double)
FRACPC_INSTANTIATE(long double)

#undef FRACPC_INSTANTIATE

}  // namespace fracpc
