#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "fracpc/parallel.hpp"
#include "fracpc/systems.hpp"

namespace fracpc {

enum class Precision {
  f64,       // IEEE binary64
  extended,  // >= 18 significant decimal digits (x87 long double here)
};

std::string_view to_string(Precision p) noexcept;
/// "f64" | "double" | "extended" | "long double"
Precision parse_precision(std::string_view text);

class UnsupportedPrecision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Significant decimal digits carried by the host's extended mode.
int extended_digits() noexcept;
bool extended_supported() noexcept;

struct DivergenceReport {
  std::pair<Precision, Precision> widths;
  std::vector<double> times;
  std::vector<double> divergence;      // max_i |y_first - y_second| at each step
  std::vector<double> cumulative_max;  // running max of divergence
  std::optional<std::size_t> first_exceedance;  // first step with divergence > threshold
  double threshold = 0.0;
  double seconds_first = 0.0;
  double seconds_second = 0.0;

  double final_cumulative() const { return cumulative_max.empty() ? 0.0 : cumulative_max.back(); }
};

/// Solves `spec` at both widths through the same engine and plan and
/// compares the states step by step. Throws UnsupportedPrecision when the
/// extended width is requested on a host without it.
DivergenceReport run_dual_precision(const ProblemSpec& spec, const PartitionPlan& plan,
                                    std::pair<Precision, Precision> widths,
                                    double threshold = 1e-6);

}  // namespace fracpc
