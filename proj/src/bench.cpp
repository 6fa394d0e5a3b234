#include "fracpc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <map>
#include <stdexcept>
#include <string>

namespace fracpc {

std::uint64_t digest_states(const Trajectory<double>& trajectory) {
  std::uint64_t hash = 1469598103934665603ull;
  const auto& states = trajectory.states();
  const auto* bytes = reinterpret_cast<const unsigned char*>(states.data());
  for (std::size_t i = 0; i < states.size() * sizeof(double); ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

TimingTable time_solve(const ProblemSpec& base, const BenchOptions& options) {
  if (options.repeats == 0) throw ValidationError("repeats: must be >= 1");
  if (options.step_counts.empty()) throw ValidationError("bench_steps: need at least one N");
  if (options.worker_counts.empty()) throw ValidationError("bench_workers: need at least one P");

  TimingTable table;
  bool warmed = !options.warmup;
  for (const std::size_t steps : options.step_counts) {
    ProblemSpec spec = base;
    spec.steps = steps;
    const Problem<double> problem = spec.instantiate<double>();
    for (const std::size_t workers : options.worker_counts) {
      const PartitionPlan plan(workers, options.mode);
      if (!warmed) {
        (void)solve_parallel(problem, plan);
        warmed = true;
      }
      TimingRow row;
      row.steps = steps;
      row.workers = workers;
      row.mode = options.mode;
      row.repeats = options.repeats;
      std::vector<double> seconds;
      for (std::size_t r = 0; r < options.repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        const auto trajectory = solve_parallel(problem, plan);
        seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        const std::uint64_t d = digest_states(trajectory);
        if (r == 0) row.digest = d;
        if (d != row.digest) row.identical_output = false;
      }
      row.seconds_median = median(seconds);
      row.seconds_min = *std::min_element(seconds.begin(), seconds.end());
      table.rows.push_back(row);
    }
  }
  return table;
}

std::vector<SpeedupRow> speedup_report(const TimingTable& table) {
  std::map<std::size_t, double> baseline;
  for (const TimingRow& row : table.rows) {
    if (row.workers == 1) baseline[row.steps] = row.seconds_median;
  }
  std::vector<SpeedupRow> out;
  for (const TimingRow& row : table.rows) {
    const auto it = baseline.find(row.steps);
    if (it == baseline.end()) {
      throw std::invalid_argument("speedup_report: no single-worker baseline for N=" +
                                  std::to_string(row.steps));
    }
    SpeedupRow s;
    s.steps = row.steps;
    s.workers = row.workers;
    s.speedup = it->second / row.seconds_median;
    s.efficiency = s.speedup / static_cast<double>(row.workers);
    out.push_back(s);
  }
  return out;
}

}  // namespace fracpc
