#include "fracpc/csv.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace fracpc {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

// Shortest text that parses back to the same value.
template <class Real>
struct Num {
  Real v;
  friend std::ostream& operator<<(std::ostream& os, Num n) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, n.v);
    return os.write(buf, r.ptr - buf);
  }
};

template <class Real>
Num<Real> num(Real v) {
  return {v};
}

}  // namespace

template <class Real>
void write_trajectory_csv(const Trajectory<Real>& trajectory, std::ostream& out,
                          std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("stride: must be >= 1");
  out << "step,t";
  for (std::size_t i = 1; i <= trajectory.dim(); ++i) out << ",y" << i;
  out << '\n';
  const std::size_t last = trajectory.steps();
  for (std::size_t n = 0; n <= last; n += stride) {
    out << n << ',' << num(trajectory.times()[n]);
    for (const Real v : trajectory.state(n)) out << ',' << num(v);
    out << '\n';
  }
}

template <class Real>
void write_trajectory_csv(const Trajectory<Real>& trajectory, const std::filesystem::path& path,
                          std::size_t stride) {
  auto out = open_out(path);
  write_trajectory_csv(trajectory, out, stride);
  close_out(out, path);
}

CsvTable read_numeric_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open for reading");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path, "empty file");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || end != cell.data() + cell.size()) {
        throw IoError(path, "line " + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_csv_file(const std::filesystem::path& path,
                    const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  auto out = open_out(path);
  write(out);
  close_out(out, path);
}

void write_divergence_csv(const DivergenceReport& report, std::ostream& out, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("stride: must be >= 1");
  out << "step,t,divergence,cumulative_max\n";
  const std::size_t points = report.divergence.size();
  for (std::size_t n = 0; n < points; n += stride) {
    out << n << ',' << num(report.times[n]) << ',' << num(report.divergence[n]) << ','
        << num(report.cumulative_max[n]) << '\n';
  }
}

void write_timing_csv(const TimingTable& table, std::ostream& out) {
  out.precision(9);
  out << "n_steps,workers,mode,seconds_median,seconds_min,repeats\n";
  for (const TimingRow& r : table.rows) {
    out << r.steps << ',' << r.workers << ',' << to_string(r.mode) << ',' << r.seconds_median
        << ',' << r.seconds_min << ',' << r.repeats << '\n';
  }
}

void write_speedup_csv(const std::vector<SpeedupRow>& rows, std::ostream& out) {
  out.precision(9);
  out << "n_steps,workers,speedup,efficiency\n";
  for (const SpeedupRow& r : rows) {
    out << r.steps << ',' << r.workers << ',' << r.speedup << ',' << r.efficiency << '\n';
  }
}

void write_strobe_csv(const BifurcationTable& table, std::ostream& out) {
  const std::size_t dim = table.rows.empty() ? 2 : table.rows.front().samples.dim;
  out << "f,k";
  if (dim == 2) {
    out << ",x,y";
  } else {
    for (std::size_t i = 1; i <= dim; ++i) out << ",y" << i;
  }
  out << '\n';
  for (const BifurcationRow& row : table.rows) {
    for (std::size_t k = 0; k < row.samples.size(); ++k) {
      out << num(row.f) << ',' << k;
      for (const double v : row.samples.sample(k)) out << ',' << num(v);
      out << '\n';
    }
  }
}

void write_stats_csv(const BifurcationTable& table, double theta, std::ostream& out) {
  out << "f,clusters,xmin,xmax,ymin,ymax,spans_both_signs\n";
  for (const BifurcationRow& row : table.rows) {
    if (row.samples.size() == 0) continue;
    const AttractorStats s = attractor_stats(row.samples, theta);
    const double ymin = s.lower.size() > 1 ? s.lower[1] : 0.0;
    const double ymax = s.upper.size() > 1 ? s.upper[1] : 0.0;
    out << num(row.f) << ',' << s.clusters << ',' << num(s.lower[0]) << ',' << num(s.upper[0])
        << ',' << num(ymin) << ',' << num(ymax) << ',' << (s.spans_both_signs ? 1 : 0) << '\n';
  }
}

template void write_trajectory_csv<double>(const Trajectory<double>&, std::ostream&, std::size_t);
template void write_trajectory_csv<long double>(const Trajectory<long double>&, std::ostream&,
                                                std::size_t);
template void write_trajectory_csv<double>(const Trajectory<double>&,
                                           const std::filesystem::path&, std::size_t);
template void write_trajectory_csv<long double>(const Trajectory<long double>&,
                                                const std::filesystem::path&, std::size_t);

}  // namespace fracpc
