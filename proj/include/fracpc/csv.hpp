#pragma once

// CSV emitters. Headers are fixed; downstream plotting keys on them.
//
//   trajectory   step,t,y1,...,yd
//   divergence   step,t,divergence,cumulative_max
//   timing       n_steps,workers,mode,seconds_median,seconds_min,repeats
//   speedup      n_steps,workers,speedup,efficiency
//   strobe       f,k,x,y           (f,k,y1,...,yd when d != 2)
//   stats        f,clusters,xmin,xmax,ymin,ymax,spans_both_signs

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracpc/analysis.hpp"
#include "fracpc/bench.hpp"
#include "fracpc/precision.hpp"
#include "fracpc/problem.hpp"

namespace fracpc {

class IoError : public std::runtime_error {
 public:
  IoError(const std::filesystem::path& path, const std::string& what)
      : std::runtime_error(path.string() + ": " + what) {}
};

/// One row per stride-th step (0, K, 2K, ...). Values use the shortest
/// decimal form that reads back to the same bits.
template <class Real>
void write_trajectory_csv(const Trajectory<Real>& trajectory, std::ostream& out,
                          std::size_t stride = 1);
template <class Real>
void write_trajectory_csv(const Trajectory<Real>& trajectory, const std::filesystem::path& path,
                          std::size_t stride = 1);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Numeric CSV reader for the files above (non-numeric cells are an error).
CsvTable read_numeric_csv(const std::filesystem::path& path);

void write_divergence_csv(const DivergenceReport& report, std::ostream& out, std::size_t stride = 1);
void write_timing_csv(const TimingTable& table, std::ostream& out);
void write_speedup_csv(const std::vector<SpeedupRow>& rows, std::ostream& out);
void write_strobe_csv(const BifurcationTable& table, std::ostream& out);
/// theta: single-linkage threshold used for the cluster count.
void write_stats_csv(const BifurcationTable& table, double theta, std::ostream& out);

/// Runs a writer against `path`, or stdout for "" and "-"; open and write
/// failures surface as IoError naming the path.
void write_csv_file(const std::filesystem::path& path,
                    const std::function<void(std::ostream&)>& write);

}  // namespace fracpc
