// Acceptance checks A1-A6. Prints one PASS/FAIL/SKIP line per criterion.
// Usage: fracpc_acceptance [A1 ... A6]   (no arguments runs all)
// Exit: 0 all pass, 1 any failure, 77 nothing failed but something skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fracpc/analysis.hpp"
#include "fracpc/bench.hpp"
#include "fracpc/csv.hpp"
#include "fracpc/parallel.hpp"
#include "fracpc/precision.hpp"

using namespace fracpc;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ProblemSpec lcr_spec(double f, double horizon, std::size_t steps, std::vector<double> init) {
  LcrParams p;
  p.f = f;
  ProblemSpec spec;
  spec.system = System::lcr(p);
  spec.orders = {0.9, 0.9};
  spec.init = {{init[0]}, {init[1]}};
  spec.horizon = horizon;
  spec.steps = steps;
  return spec;
}

double max_abs_diff(const Trajectory<double>& a, const Trajectory<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.states().size(); ++i) {
    worst = std::max(worst, std::abs(a.states()[i] - b.states()[i]));
  }
  return worst;
}

Outcome a1() {
  const auto start = std::chrono::steady_clock::now();
  const auto study = mittag_leffler_convergence(0.9, {1u << 10, 1u << 11, 1u << 12, 1u << 13},
                                                PartitionPlan(1));
  const double secs = seconds_since(start);
  bool decreasing = true;
  for (std::size_t i = 1; i < study.errors.size(); ++i) {
    decreasing = decreasing && study.errors[i] < study.errors[i - 1];
  }
  const bool ok = decreasing && std::abs(study.fitted_order - 1.9) <= 0.2 && secs < 10.0;
  return {ok ? Verdict::pass : Verdict::fail,
          fmt("order=%.4f (want 1.9+-0.2) errors=%.3e..%.3e decreasing=%d E(-1)=%.10f time=%.2fs",
              study.fitted_order, study.errors.front(), study.errors.back(), decreasing,
              study.reference, secs)};
}

Outcome a2() {
  const auto start = std::chrono::steady_clock::now();
  const auto p = lcr_spec(0.1, 100.0, 10000, {0.1, 0.1}).instantiate<double>();
  const auto seq = solve_sequential(p);
  const bool bitwise = solve_parallel(p, PartitionPlan(1)).states() == seq.states();
  double worst = 0.0;
  for (const std::size_t workers : {2u, 4u, 8u}) {
    for (const PartitionMode mode : {PartitionMode::balanced, PartitionMode::static_block}) {
      worst = std::max(worst, max_abs_diff(solve_parallel(p, PartitionPlan(workers, mode)), seq));
    }
  }
  const double secs = seconds_since(start);
  const bool ok = bitwise && worst <= 1e-10 && secs < 30.0;
  return {ok ? Verdict::pass : Verdict::fail,
          fmt("max|par-seq|=%.3e over P=2,4,8 (want <=1e-10) P1_bitwise=%d time=%.2fs", worst,
              bitwise, secs)};
}

Outcome a3() {
  auto render = [] {
    std::ostringstream os;
    const auto spec = lcr_spec(0.1, 50.0, 5000, {0.1, 0.1});
    write_trajectory_csv(solve_parallel(spec.instantiate<double>(), PartitionPlan(4)), os, 7);
    const auto report = run_dual_precision(lcr_spec(0.085, 20.0, 2000, {0.1, 0.1}),
                                           PartitionPlan(3), {Precision::f64, Precision::extended});
    write_divergence_csv(report, os);
    SweepOptions opt;
    opt.f_values = {0.08, 0.1};
    opt.transient = 2000;
    opt.seeds = {{1.0, -1.0}, {-1.0, 1.0}};
    const auto table = sweep_bifurcation(lcr_spec(0.0, 80.0, 8000, {0.0, 0.0}), opt,
                                         PartitionPlan(2, PartitionMode::static_block));
    write_strobe_csv(table, os);
    write_stats_csv(table, 0.3, os);
    return os.str();
  };
  const std::string first = render();
  const std::string second = render();
  const bool ok = first == second && !first.empty();
  return {ok ? Verdict::pass : Verdict::fail,
          fmt("trajectory+divergence+strobe+stats CSVs %zu bytes, repeat identical=%d", first.size(),
              first == second)};
}

Outcome a4() {
  const std::size_t n = 200000;
  const auto base = lcr_spec(0.1, 0.01 * n, n, {0.1, 0.1});
  BenchOptions scaling;
  scaling.step_counts = {n, 2 * n};
  scaling.repeats = 1;
  const auto t1 = time_solve(base, scaling);
  const double ratio = t1.rows[1].seconds_median / t1.rows[0].seconds_median;
  const bool ratio_ok = ratio >= 3.2 && ratio <= 4.8;

  BenchOptions par;
  par.step_counts = {n};
  par.worker_counts = {1, 4};
  par.repeats = 1;
  const auto speedups = speedup_report(time_solve(base, par));
  const double s4 = speedups.back().speedup;
  const unsigned cores = std::thread::hardware_concurrency();

  std::string detail = fmt("time(2N)/time(N)=%.3f (want 3.2..4.8, N=%zu: %.2fs) speedup(4)=%.3f "
                           "(want >=2) cores=%u",
                           ratio, n, t1.rows[0].seconds_median, s4, cores);
  if (!ratio_ok) return {Verdict::fail, detail};
  if (cores < 4) return {Verdict::skip, detail + "; speedup needs a >=4-core host"};
  return {s4 >= 2.0 ? Verdict::pass : Verdict::fail, detail};
}

Outcome a5() {
  if (!extended_supported()) {
    return {Verdict::fail, "extended precision unavailable on this host"};
  }
  const std::size_t n = 300000;
  ProblemSpec linear;
  linear.system = System::linear(-1.0);
  linear.orders = {0.9};
  linear.init = {{1.0}};
  linear.horizon = 300.0;
  linear.steps = n;
  const auto lin = run_dual_precision(linear, PartitionPlan(1), {Precision::f64, Precision::extended});
  const auto lcr = run_dual_precision(lcr_spec(0.085, 3000.0, n, {1.0, -1.0}), PartitionPlan(1),
                                      {Precision::f64, Precision::extended});
  const bool lin_ok = lin.final_cumulative() <= 1e-6;
  const bool lcr_ok = lcr.final_cumulative() <= 1e-4;
  const bool time_ok = lin.seconds_first <= lin.seconds_second && lcr.seconds_first <= lcr.seconds_second;
  return {lin_ok && lcr_ok && time_ok ? Verdict::pass : Verdict::fail,
          fmt("linear div=%.3e (want <=1e-6) lcr(f=0.085) div=%.3e (want <=1e-4) "
              "f64/ext time linear %.1fs/%.1fs lcr %.1fs/%.1fs",
              lin.final_cumulative(), lcr.final_cumulative(), lin.seconds_first,
              lin.seconds_second, lcr.seconds_first, lcr.seconds_second)};
}

Outcome a6() {
  const std::size_t n = 200000;
  const double horizon = 2000.0;
  const auto eq = equilibria(LcrParams{});
  const std::vector<std::vector<double>> seeds{{eq.e_plus[0] + 0.01, eq.e_plus[1] + 0.01},
                                               {eq.e_minus[0] - 0.01, eq.e_minus[1] - 0.01}};
  const PartitionPlan plan(1);

  // (i) f = 0: every post-transient state stays near the seed's equilibrium
  double worst = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    const auto target = s == 0 ? eq.e_plus : eq.e_minus;
    const auto traj = solve_parallel(lcr_spec(0.0, horizon, n, seeds[s]).instantiate<double>(), plan);
    for (std::size_t k = n / 2; k <= n; ++k) {
      worst = std::max({worst, std::abs(traj.state(k)[0] - target[0]),
                        std::abs(traj.state(k)[1] - target[1])});
    }
  }
  const bool stable = worst <= 1e-2;

  SweepOptions opt;
  opt.f_values = {0.085, 0.125};
  opt.transient = n / 2;
  opt.seeds = seeds;
  const auto table = sweep_bifurcation(lcr_spec(0.0, horizon, n, {0.0, 0.0}), opt, plan);

  // (ii) two attractors, each on one side
  const auto quasi = cluster_stats(table.rows[0].samples);
  bool one_sided = true;
  for (const auto& c : quasi) one_sided = one_sided && !c.spans_both_signs;
  const bool two = quasi.size() == 2 && one_sided;

  // (iii) a single attractor covering both sides
  const auto scroll = attractor_stats(table.rows[1].samples);
  const bool merged = scroll.clusters == 1 && scroll.spans_both_signs;

  return {stable && two && merged ? Verdict::pass : Verdict::fail,
          fmt("f=0 max|y-E|=%.2e (want <=1e-2); f=0.085 clusters=%zu one_sided=%d (want 2,1); "
              "f=0.125 clusters=%zu both_signs=%d x=[%.3f,%.3f] (want 1,1)",
              worst, quasi.size(), one_sided, scroll.clusters, scroll.spans_both_signs,
              scroll.lower[0], scroll.upper[0])};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::function<Outcome()>> checks{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5}, {"A6", a6}};
  std::vector<std::string> wanted(argv + 1, argv + argc);
  if (wanted.empty()) {
    for (const auto& [name, fn] : checks) wanted.push_back(name);
  }
  bool failed = false, skipped = false;
  for (const std::string& name : wanted) {
    const auto it = checks.find(name);
    if (it == checks.end()) {
      std::fprintf(stderr, "unknown criterion %s\n", name.c_str());
      return 2;
    }
    Outcome out;
    try {
      out = it->second();
    } catch (const std::exception& e) {
      out = {Verdict::fail, std::string("error: ") + e.what()};
    }
    const char* tag = out.verdict == Verdict::pass ? "PASS" : out.verdict == Verdict::fail ? "FAIL" : "SKIP";
    std::printf("%s %s %s\n", name.c_str(), tag, out.detail.c_str());
    std::fflush(stdout);
    failed = failed || out.verdict == Verdict::fail;
    skipped = skipped || out.verdict == Verdict::skip;
  }
  if (failed) return 1;
  return skipped ? 77 : 0;
}
