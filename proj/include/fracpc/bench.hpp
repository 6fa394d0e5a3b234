#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fracpc/parallel.hpp"
#include "fracpc/systems.hpp"

namespace fracpc {

struct TimingRow {
  std::size_t steps = 0;
  std::size_t workers = 0;
  PartitionMode mode = PartitionMode::balanced;
  double seconds_median = 0.0;
  double seconds_min = 0.0;
  std::size_t repeats = 0;
  std::uint64_t digest = 0;          // FNV-1a of the trajectory state bytes
  bool identical_output = true;      // every repeat produced the same bytes
};

struct TimingTable {
  std::vector<TimingRow> rows;
};

struct BenchOptions {
  std::vector<std::size_t> step_counts;
  std::vector<std::size_t> worker_counts{1};
  PartitionMode mode = PartitionMode::balanced;
  std::size_t repeats = 3;
  bool warmup = true;  // one untimed solve before the first cell
};

/// Times solve_parallel over every (N, P) cell with the same problem data
/// (base.steps is replaced by each N).
TimingTable time_solve(const ProblemSpec& base, const BenchOptions& options);

struct SpeedupRow {
  std::size_t steps = 0;
  std::size_t workers = 0;
  double speedup = 0.0;     // time(P=1) / time(P)
  double efficiency = 0.0;  // speedup / P
};

/// Throws std::invalid_argument if some N lacks a P = 1 row.
std::vector<SpeedupRow> speedup_report(const TimingTable& table);

std::uint64_t digest_states(const Trajectory<double>& trajectory);

}  // namespace fracpc
