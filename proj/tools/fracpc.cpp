// fracpc: command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 validation, 3 runtime (non-finite state,
// I/O, unsupported precision, failed verification).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracpc/analysis.hpp"
#include "fracpc/bench.hpp"
#include "fracpc/config.hpp"
#include "fracpc/csv.hpp"
#include "fracpc/expr.hpp"
#include "fracpc/kernels.hpp"
#include "fracpc/parallel.hpp"
#include "fracpc/precision.hpp"

namespace {

using namespace fracpc;

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::string> workers, steps, horizon, mode, precision, out, stride, kernel;
  std::vector<std::string> set;
};

struct BifurcateFlags {
  std::optional<std::string> f_start, f_end, f_count, transient_frac, seeds, stats_out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Configuration file");
  cmd->add_option("--workers", flags.workers, "Worker count P");
  cmd->add_option("--steps", flags.steps, "Step count N");
  cmd->add_option("--horizon", flags.horizon, "Time horizon T");
  cmd->add_option("--mode", flags.mode, "Partition mode: balanced|static");
  cmd->add_option("--precision", flags.precision, "f64|extended");
  cmd->add_option("--out", flags.out, "Output CSV path (default: stdout)");
  cmd->add_option("--stride", flags.stride, "Write every K-th step");
  cmd->add_option("--kernel", flags.kernel, "History kernel: scalar|avx2|neon");
  cmd->add_option("--set", flags.set, "Extra key=value override (repeatable)");
}

KeyValues overrides_from(const CommonFlags& c, const BifurcateFlags* b) {
  KeyValues kv;
  auto put = [&kv](const char* key, const std::optional<std::string>& v) {
    if (v) kv[key] = *v;
  };
  put("workers", c.workers);
  put("steps", c.steps);
  put("horizon", c.horizon);
  put("mode", c.mode);
  put("precision", c.precision);
  put("out", c.out);
  put("stride", c.stride);
  put("kernel", c.kernel);
  for (const std::string& item : c.set) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("--set: expected key=value, got '" + item + "'");
    }
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (b) {
    put("f_start", b->f_start);
    put("f_end", b->f_end);
    put("f_count", b->f_count);
    put("transient_frac", b->transient_frac);
    put("seeds", b->seeds);
    put("stats_out", b->stats_out);
  }
  return kv;
}

void log_config(const RunConfig& cfg) {
  std::cerr << "# resolved configuration\n";
  std::string line;
  std::istringstream lines(cfg.describe());
  while (std::getline(lines, line)) std::cerr << "#   " << line << '\n';
  std::cerr << "# kernel " << kernels::name(kernels::active()) << '\n';
}

int run_solve(const RunConfig& cfg) {
  const ProblemSpec spec = cfg.problem();
  if (cfg.precision == Precision::extended) {
    if (!extended_supported()) {
      throw UnsupportedPrecision("extended precision unavailable on this host; fallback: software extended");
    }
    const auto traj = solve_parallel(spec.instantiate<long double>(), cfg.plan());
    write_csv_file(cfg.out, [&](std::ostream& os) { write_trajectory_csv(traj, os, cfg.stride); });
  } else {
    const auto traj = solve_parallel(spec.instantiate<double>(), cfg.plan());
    write_csv_file(cfg.out, [&](std::ostream& os) { write_trajectory_csv(traj, os, cfg.stride); });
  }
  return 0;
}

int run_verify(const RunConfig& cfg) {
  std::vector<std::size_t> steps;
  for (const std::size_t level : cfg.verify_levels) steps.push_back(std::size_t{1} << level);
  const ConvergenceStudy study = mittag_leffler_convergence(cfg.verify_alpha, steps, cfg.plan());
  std::printf("alpha=%.6g reference E_alpha(-1)=%.15g\n", study.alpha, study.reference);
  std::printf("%10s %14s %8s\n", "N", "error", "order");
  for (std::size_t i = 0; i < study.steps.size(); ++i) {
    if (i == 0) {
      std::printf("%10zu %14.6e %8s\n", study.steps[i], study.errors[i], "-");
    } else {
      std::printf("%10zu %14.6e %8.4f\n", study.steps[i], study.errors[i], study.pair_orders[i - 1]);
    }
  }
  std::printf("observed order %.4f (minimum %.2f)\n", study.fitted_order, cfg.verify_min_order);
  if (!(study.fitted_order >= cfg.verify_min_order)) {
    std::cerr << "fracpc: verify failed: observed order " << study.fitted_order << " < "
              << cfg.verify_min_order << '\n';
    return kExitRuntime;
  }
  return 0;
}

int run_bench(const RunConfig& cfg) {
  BenchOptions opts;
  opts.step_counts = cfg.bench_steps.empty() ? std::vector<std::size_t>{cfg.steps} : cfg.bench_steps;
  opts.worker_counts = cfg.bench_workers;
  opts.mode = cfg.mode;
  opts.repeats = cfg.repeats;
  const TimingTable table = time_solve(cfg.problem(), opts);
  for (const TimingRow& row : table.rows) {
    if (!row.identical_output) {
      throw std::runtime_error("bench: repeats of N=" + std::to_string(row.steps) + ", P=" +
                               std::to_string(row.workers) + " produced different trajectories");
    }
  }
  write_csv_file(cfg.out, [&](std::ostream& os) { write_timing_csv(table, os); });
  const bool has_baseline = std::any_of(table.rows.begin(), table.rows.end(),
                                        [](const TimingRow& r) { return r.workers == 1; });
  if (has_baseline) {
    const auto speedups = speedup_report(table);
    for (const SpeedupRow& s : speedups) {
      std::fprintf(stderr, "# N=%zu P=%zu speedup=%.3f efficiency=%.3f\n", s.steps, s.workers,
                   s.speedup, s.efficiency);
    }
    if (!cfg.speedup_out.empty()) {
      write_csv_file(cfg.speedup_out, [&](std::ostream& os) { write_speedup_csv(speedups, os); });
    }
  }
  return 0;
}

int run_bifurcate(const RunConfig& cfg) {
  const ProblemSpec spec = cfg.problem();
  SweepOptions opts;
  opts.f_values = cfg.f_values();
  opts.transient = static_cast<std::size_t>(cfg.transient_frac * static_cast<double>(spec.steps));
  opts.seeds = cfg.seeds;
  opts.phase = cfg.strobe_phase;
  opts.period = cfg.strobe_period;
  const BifurcationTable table = sweep_bifurcation(spec, opts, cfg.plan());

  write_csv_file(cfg.out, [&](std::ostream& os) { write_strobe_csv(table, os); });
  if (!cfg.stats_out.empty()) {
    write_csv_file(cfg.stats_out, [&](std::ostream& os) { write_stats_csv(table, cfg.theta, os); });
  }
  for (const BifurcationRow& row : table.rows) {
    if (row.samples.size() == 0) continue;
    const AttractorStats s = attractor_stats(row.samples, cfg.theta);
    std::fprintf(stderr, "# f=%.6g samples=%zu clusters=%zu x=[%.4f, %.4f] both_signs=%d\n", row.f,
                 s.samples, s.clusters, s.lower[0], s.upper[0], s.spans_both_signs ? 1 : 0);
  }
  return 0;
}

int run_precision(const RunConfig& cfg) {
  const DivergenceReport report = run_dual_precision(
      cfg.problem(), cfg.plan(), {Precision::f64, Precision::extended}, cfg.threshold);
  write_csv_file(cfg.out,
                 [&](std::ostream& os) { write_divergence_csv(report, os, cfg.stride); });
  std::fprintf(stderr, "# max divergence %.3e; f64 %.3fs, extended %.3fs (ratio %.2f)\n",
               report.final_cumulative(), report.seconds_first, report.seconds_second,
               report.seconds_second / report.seconds_first);
  if (report.first_exceedance) {
    std::fprintf(stderr, "# divergence first exceeds %.1e at step %zu\n", report.threshold,
                 *report.first_exceedance);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel fractional-order ABM solver"};
  app.require_subcommand(1);

  CommonFlags common;
  BifurcateFlags bif;
  CLI::App* solve = app.add_subcommand("solve", "Solve a problem and write the trajectory CSV");
  CLI::App* verify = app.add_subcommand("verify", "Convergence check against Mittag-Leffler");
  CLI::App* bench = app.add_subcommand("bench", "Timing table over step and worker counts");
  CLI::App* bifurcate = app.add_subcommand("bifurcate", "Strobed forcing sweep of the LCR circuit");
  CLI::App* precision = app.add_subcommand("precision", "64-bit vs extended divergence");
  for (CLI::App* cmd : {solve, verify, bench, bifurcate, precision}) add_common(cmd, common);
  bifurcate->add_option("--f-start", bif.f_start, "First forcing amplitude");
  bifurcate->add_option("--f-end", bif.f_end, "Last forcing amplitude");
  bifurcate->add_option("--f-count", bif.f_count, "Number of amplitudes");
  bifurcate->add_option("--transient-frac", bif.transient_frac, "Fraction of steps discarded");
  bifurcate->add_option("--seeds", bif.seeds, "Initial points 'x,y; x,y'");
  bifurcate->add_option("--stats-out", bif.stats_out, "Attractor statistics CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "fracpc: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    const KeyValues overrides = overrides_from(common, chosen == bifurcate ? &bif : nullptr);
    const std::optional<std::filesystem::path> path =
        common.config.empty() ? std::nullopt : std::optional<std::filesystem::path>(common.config);
    const RunConfig cfg = load_config(path, name, overrides);
    if (!cfg.kernel.empty()) kernels::set_active(kernels::parse_isa(cfg.kernel));
    log_config(cfg);

    if (name == "solve") return run_solve(cfg);
    if (name == "verify") return run_verify(cfg);
    if (name == "bench") return run_bench(cfg);
    if (name == "bifurcate") return run_bifurcate(cfg);
    return run_precision(cfg);
  } catch (const ConfigParseError& e) {
    std::cerr << "fracpc: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "fracpc: invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fracpc: invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "fracpc: " << e.what() << '\n';
    return kExitRuntime;
  }
}
