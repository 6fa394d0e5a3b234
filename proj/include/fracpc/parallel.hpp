#pragma once

// Worker-partitioned history sums with a rank-ordered all-reduce.
//
// Each step, every worker sums its chunk of [0, n] into a private
// PartialSums; after a barrier the designated writer (rank 0) folds the
// partials in ascending rank order, finishes the step and appends f_{n+1}
// to the shared history; a second barrier publishes the append. No worker
// owns a privileged role other than doing that serial tail.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fracpc/problem.hpp"
#include "fracpc/solver.hpp"

namespace fracpc {

enum class PartitionMode {
  balanced,      // [0, n] split into P near-equal chunks every step
  static_block,  // fixed blocks [N_P p, N_P (p+1)) over the horizon, clamped to k <= n
};

std::string_view to_string(PartitionMode mode) noexcept;
/// Accepts "balanced", "static" and "static_block".
PartitionMode parse_partition_mode(std::string_view text);

class PartitionPlan {
 public:
  /// inner: sub-chunks per worker chunk, folded in order inside the worker.
  explicit PartitionPlan(std::size_t workers = 1, PartitionMode mode = PartitionMode::balanced,
                         std::size_t inner = 1);

  std::size_t workers() const noexcept { return workers_; }
  PartitionMode mode() const noexcept { return mode_; }
  std::size_t inner() const noexcept { return inner_; }

  /// History indices summed by `worker` at step n of an N-step solve,
  /// already clamped to [0, n].
  IndexRange chunk(std::size_t worker, std::size_t n, std::size_t total_steps) const;

  /// Sub-chunk `part` of a worker chunk (balanced split into inner() parts).
  IndexRange sub_chunk(IndexRange chunk, std::size_t part) const;

 private:
  std::size_t workers_;
  PartitionMode mode_;
  std::size_t inner_;
};

/// Balanced split of [0, count) into `parts` ranges whose sizes differ by <= 1.
IndexRange balanced_range(std::size_t count, std::size_t parts, std::size_t index);

/// Per-component predictor (sp) and corrector (sc) partial sums of one worker.
template <class Real>
struct PartialSums {
  std::vector<Real> sp;
  std::vector<Real> sc;
};

/// Sums of one chunk (every component). The chunk must lie inside [0, n].
template <class Real>
PartialSums<Real> partial_sums(const Scheme<Real>& scheme, IndexRange chunk, std::size_t n,
                               const History<Real>& history);

/// Left fold in rank order: ((p0 + p1) + p2) + ...
template <class Real>
PartialSums<Real> reduce_all(std::span<const PartialSums<Real>> partials);

template <class Real>
Trajectory<Real> solve_parallel(const Problem<Real>& problem, const PartitionPlan& plan,
                                const SolveOptions& options = {});

}  // namespace fracpc
