#include "fracpc/precision.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <variant>

namespace fracpc {

std::string_view to_string(Precision p) noexcept {
  return p == Precision::f64 ? "f64" : "extended";
}

Precision parse_precision(std::string_view text) {
  if (text == "f64" || text == "double") return Precision::f64;
  if (text == "extended" || text == "long double") return Precision::extended;
  throw ValidationError("precision: expected f64|extended, got '" + std::string(text) + "'");
}

int extended_digits() noexcept { return std::numeric_limits<long double>::digits10; }

bool extended_supported() noexcept { return extended_digits() >= 18; }

namespace {

using AnyTrajectory = std::variant<Trajectory<double>, Trajectory<long double>>;

AnyTrajectory run_at(const ProblemSpec& spec, const PartitionPlan& plan, Precision p,
                     double& seconds) {
  const auto start = std::chrono::steady_clock::now();
  AnyTrajectory out;
  if (p == Precision::f64) {
    out = solve_parallel(spec.instantiate<double>(), plan);
  } else {
    if (!extended_supported()) {
      throw UnsupportedPrecision(
          "extended precision unavailable: long double carries only " +
          std::to_string(extended_digits()) +
          " digits here; the fallback is a software extended (double-double) build");
    }
    out = solve_parallel(spec.instantiate<long double>(), plan);
  }
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

long double value_at(const AnyTrajectory& t, std::size_t n, std::size_t i) {
  return std::visit([&](const auto& tr) { return static_cast<long double>(tr.state(n)[i]); }, t);
}

double time_at(const AnyTrajectory& t, std::size_t n) {
  return std::visit([&](const auto& tr) { return static_cast<double>(tr.times()[n]); }, t);
}

}  // namespace

DivergenceReport run_dual_precision(const ProblemSpec& spec, const PartitionPlan& plan,
                                    std::pair<Precision, Precision> widths, double threshold) {
  DivergenceReport report;
  report.widths = widths;
  report.threshold = threshold;

  const AnyTrajectory first = run_at(spec, plan, widths.first, report.seconds_first);
  const AnyTrajectory second = run_at(spec, plan, widths.second, report.seconds_second);

  const std::size_t points = spec.steps + 1;
  const std::size_t dim = spec.orders.size();
  report.times.resize(points);
  report.divergence.resize(points);
  report.cumulative_max.resize(points);
  double running = 0.0;
  for (std::size_t n = 0; n < points; ++n) {
    long double worst = 0.0L;
    for (std::size_t i = 0; i < dim; ++i) {
      worst = std::max(worst, std::abs(value_at(first, n, i) - value_at(second, n, i)));
    }
    const double d = static_cast<double>(worst);
    running = std::max(running, d);
    report.times[n] = time_at(first, n);
    report.divergence[n] = d;
    report.cumulative_max[n] = running;
    if (!report.first_exceedance && d > threshold) report.first_exceedance = n;
  }
  return report;
}

}  // namespace fracpc
