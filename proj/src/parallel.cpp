#include "fracpc/parallel.hpp"

#include <atomic>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

namespace fracpc {

std::string_view to_string(PartitionMode mode) noexcept {
  return mode == PartitionMode::balanced ? "balanced" : "static";
}

PartitionMode parse_partition_mode(std::string_view text) {
  if (text == "balanced") return PartitionMode::balanced;
  if (text == "static" || text == "static_block") return PartitionMode::static_block;
  throw ValidationError("mode: expected balanced|static, got '" + std::string(text) + "'");
}

IndexRange balanced_range(std::size_t count, std::size_t parts, std::size_t index) {
  return {index * count / parts, (index + 1) * count / parts};
}

PartitionPlan::PartitionPlan(std::size_t workers, PartitionMode mode, std::size_t inner)
    : workers_(workers), mode_(mode), inner_(inner) {
  if (workers_ == 0) throw ValidationError("workers: must be >= 1");
  if (inner_ == 0) throw ValidationError("inner: must be >= 1");
}

IndexRange PartitionPlan::chunk(std::size_t worker, std::size_t n, std::size_t total_steps) const {
  const std::size_t count = n + 1;
  if (mode_ == PartitionMode::balanced) return balanced_range(count, workers_, worker);

  const std::size_t block = total_steps / workers_;
  std::size_t lo = block * worker;
  std::size_t hi = (worker + 1 == workers_) ? total_steps + 1 : block * (worker + 1);
  lo = std::min(lo, count);
  hi = std::min(hi, count);
  return {lo, hi};
}

IndexRange PartitionPlan::sub_chunk(IndexRange chunk, std::size_t part) const {
  const IndexRange local = balanced_range(chunk.size(), inner_, part);
  return {chunk.lo + local.lo, chunk.lo + local.hi};
}

template <class Real>
PartialSums<Real> partial_sums(const Scheme<Real>& scheme, IndexRange chunk, std::size_t n,
                               const History<Real>& history) {
  if (chunk.hi > n + 1 && !chunk.empty()) {
    throw std::invalid_argument("partial_sums: chunk exceeds [0, n]");
  }
  if (history.size() < n + 1) throw std::invalid_argument("partial_sums: history too short");
  PartialSums<Real> out{std::vector<Real>(scheme.dim()), std::vector<Real>(scheme.dim())};
  scheme.chunk_sums(chunk, n, history, out.sp, out.sc);
  return out;
}

template <class Real>
PartialSums<Real> reduce_all(std::span<const PartialSums<Real>> partials) {
  if (partials.empty()) return {};
  PartialSums<Real> total = partials.front();
  for (std::size_t p = 1; p < partials.size(); ++p) {
    for (std::size_t i = 0; i < total.sp.size(); ++i) {
      total.sp[i] += partials[p].sp[i];
      total.sc[i] += partials[p].sc[i];
    }
  }
  return total;
}

namespace {

// Sense-reversing barrier: spins briefly, then parks on the phase counter.
class StepBarrier {
 public:
  explicit StepBarrier(std::size_t parties) : parties_(parties) {}

  void arrive_and_wait() {
    const std::uint64_t phase = phase_.load(std::memory_order_acquire);
    if (arrived_.fetch_add(1, std::memory_order_acq_rel) + 1 == parties_) {
      arrived_.store(0, std::memory_order_relaxed);
      phase_.store(phase + 1, std::memory_order_release);
      phase_.notify_all();
      return;
    }
    for (int spin = 0; spin < kSpins; ++spin) {
      if (phase_.load(std::memory_order_acquire) != phase) return;
    }
    while (phase_.load(std::memory_order_acquire) == phase) {
      phase_.wait(phase, std::memory_order_acquire);
    }
  }

 private:
  static constexpr int kSpins = 4096;
  const std::size_t parties_;
  std::atomic<std::size_t> arrived_{0};
  std::atomic<std::uint64_t> phase_{0};
};

template <class Real>
class ParallelRun {
 public:
  ParallelRun(const Problem<Real>& problem, const PartitionPlan& plan, const SolveOptions& options)
      : scheme_(problem),
        plan_(plan),
        history_(scheme_.dim(), scheme_.steps() + 1),
        out_(scheme_, options.keep_predicted),
        partials_(plan.workers()),
        barrier_(plan.workers()) {
    const std::size_t d = scheme_.dim();
    for (auto& p : partials_) p = {std::vector<Real>(d), std::vector<Real>(d)};
    scratch_sp_.resize(plan.workers() * d);
    scratch_sc_.resize(plan.workers() * d);
    y_pred_.resize(d);
    f_pred_.resize(d);
    y_.resize(d);
    f_.resize(d);
    reduced_.sp.resize(d);
    reduced_.sc.resize(d);
  }

  Trajectory<Real> run() {
    scheme_.initial_rhs(f_);
    history_.append(f_);
    out_.set_initial(scheme_.initial_state(), f_);

    std::vector<std::jthread> threads;
    threads.reserve(plan_.workers() - 1);
    for (std::size_t rank = 1; rank < plan_.workers(); ++rank) {
      threads.emplace_back([this, rank] { work(rank); });
    }
    work(0);
    threads.clear();

    if (failure_) std::rethrow_exception(failure_);
    return std::move(out_).finish();
  }

 private:
  void work(std::size_t rank) {
    const std::size_t steps = scheme_.steps();
    for (std::size_t n = 0; n < steps; ++n) {
      local_sums(rank, n);
      barrier_.arrive_and_wait();
      if (rank == 0) writer_step(n);
      barrier_.arrive_and_wait();
      if (stop_.load(std::memory_order_relaxed)) return;
    }
  }

  void local_sums(std::size_t rank, std::size_t n) {
    const std::size_t d = scheme_.dim();
    PartialSums<Real>& mine = partials_[rank];
    const IndexRange chunk = plan_.chunk(rank, n, scheme_.steps());
    if (plan_.inner() == 1) {
      scheme_.chunk_sums(chunk, n, history_, mine.sp, mine.sc);
      return;
    }
    std::span<Real> sp{scratch_sp_.data() + rank * d, d};
    std::span<Real> sc{scratch_sc_.data() + rank * d, d};
    for (std::size_t part = 0; part < plan_.inner(); ++part) {
      const IndexRange sub = plan_.sub_chunk(chunk, part);
      if (part == 0) {
        scheme_.chunk_sums(sub, n, history_, mine.sp, mine.sc);
        continue;
      }
      scheme_.chunk_sums(sub, n, history_, sp, sc);
      for (std::size_t i = 0; i < d; ++i) {
        mine.sp[i] += sp[i];
        mine.sc[i] += sc[i];
      }
    }
  }

  void writer_step(std::size_t n) {
    if (stop_.load(std::memory_order_relaxed)) return;
    try {
      const std::size_t d = scheme_.dim();
      for (std::size_t i = 0; i < d; ++i) {
        reduced_.sp[i] = partials_[0].sp[i];
        reduced_.sc[i] = partials_[0].sc[i];
      }
      for (std::size_t p = 1; p < partials_.size(); ++p) {
        for (std::size_t i = 0; i < d; ++i) {
          reduced_.sp[i] += partials_[p].sp[i];
          reduced_.sc[i] += partials_[p].sc[i];
        }
      }
      scheme_.finish_step(n, reduced_.sp, reduced_.sc, y_pred_, f_pred_, y_, f_);
      history_.append(f_);
      out_.set_step(n + 1, y_pred_, y_, f_);
    } catch (...) {
      failure_ = std::current_exception();
      stop_.store(true, std::memory_order_relaxed);
    }
  }

  const Scheme<Real> scheme_;
  const PartitionPlan plan_;
  History<Real> history_;
  TrajectoryBuilder<Real> out_;
  std::vector<PartialSums<Real>> partials_;
  std::vector<Real> scratch_sp_, scratch_sc_;
  PartialSums<Real> reduced_;
  std::vector<Real> y_pred_, f_pred_, y_, f_;
  StepBarrier barrier_;
  std::atomic<bool> stop_{false};
  std::exception_ptr failure_;
};

}  // namespace

template <class Real>
Trajectory<Real> solve_parallel(const Problem<Real>& problem, const PartitionPlan& plan,
                                const SolveOptions& options) {
  ParallelRun<Real> run(problem, plan, options);
  return run.run();
}

#define FRACPC_INSTANTIATE(Real)                                                                \
  template PartialSums<Real> partial_sums<Real>(const Scheme<Real>&, IndexRange, std::size_t,   \
                                                const History<Real>&);                          \
  template PartialSums<Real> reduce_all<Real>(std::span<const PartialSums<Real>>);              \
  template Trajectory<Real> solve_parallel<Real>(const Problem<Real>&, const PartitionPlan&,    \
                                                 const SolveOptions&);

FRACPC_INSTANTIATE(double)
FRACPC_INSTANTIATE(long double)

#undef FRACPC_INSTANTIATE

}  // namespace fracpc
