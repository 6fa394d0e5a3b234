#pragma once

// Run configuration: flat `key = value` text with optional [section]s, one
// per subcommand. Keys before any section apply to every subcommand; keys in
// the active subcommand's section override them; command-line flags override
// both. Values may be double-quoted (needed for expressions containing '#').
//
//   system  = lcr                  # lcr | linear | expr
//   orders  = 0.9, 0.9             # one value is broadcast to every component
//   init    = 0.1, 0.1
//   horizon = 2000
//   steps   = 200000
//
//   [bifurcate]
//   f_start = 0.08
//   f_end   = 0.13
//   f_count = 11
//   seeds   = -1.0, 1.0; 1.0, -1.0

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracpc/parallel.hpp"
#include "fracpc/precision.hpp"
#include "fracpc/systems.hpp"

namespace fracpc {

using KeyValues = std::map<std::string, std::string>;

class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Section name -> keys; the unnamed leading section is "".
using ConfigSections = std::map<std::string, KeyValues>;

ConfigSections parse_config_text(std::string_view text, const std::string& source = "<config>");
ConfigSections read_config_file(const std::filesystem::path& path);

struct RunConfig {
  std::string subcommand;

  // system
  std::string system = "lcr";
  LcrParams lcr{};
  double lambda = -1.0;
  std::size_t linear_dim = 1;
  std::vector<std::string> rhs;

  // problem
  std::vector<double> orders;
  std::vector<double> init;
  std::vector<double> init_rate;
  double horizon = 0.0;
  std::size_t steps = 0;

  // execution
  Precision precision = Precision::f64;
  std::size_t workers = 1;
  PartitionMode mode = PartitionMode::balanced;
  std::size_t inner = 1;
  std::string kernel;  // empty: keep the runtime default

  // output
  std::string out;
  std::size_t stride = 1;

  // bifurcate
  std::vector<std::vector<double>> seeds;
  double f_start = 0.0;
  double f_end = 0.0;
  std::size_t f_count = 1;
  double transient_frac = 0.5;
  std::optional<double> strobe_period;
  double strobe_phase = 0.0;
  double theta = 0.3;
  std::string stats_out;

  // bench
  std::vector<std::size_t> bench_steps;
  std::vector<std::size_t> bench_workers{1, 2, 4};
  std::size_t repeats = 3;
  std::string speedup_out;

  // precision
  double threshold = 1e-6;

  // verify
  double verify_alpha = 0.9;
  std::vector<std::size_t> verify_levels{10, 11, 12, 13};
  double verify_min_order = 1.5;

  std::size_t dim() const;
  System make_system() const;
  /// Builds and validates the problem; throws ValidationError naming the field.
  ProblemSpec problem() const;
  PartitionPlan plan() const;
  std::vector<double> f_values() const;
  /// Resolved configuration, one `key = value` per line.
  std::string describe() const;
};

/// Merges file (may be absent), the subcommand's section and overrides, then
/// converts and validates every field.
RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      std::string_view subcommand, const KeyValues& overrides);
RunConfig resolve_config(const ConfigSections& sections, std::string_view subcommand,
                         const KeyValues& overrides);

}  // namespace fracpc
