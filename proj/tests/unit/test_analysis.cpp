#include <stdexcept>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fracpc/analysis.hpp"

using namespace fracpc;

namespace {

Trajectory<double> make_traj(std::size_t steps, double horizon, double (*fn)(double)) {
  std::vector<double> times, states;
  for (std::size_t n = 0; n <= steps; ++n) {
    const double t = static_cast<double>(n) * horizon / static_cast<double>(steps);
    times.push_back(t);
    states.push_back(fn(t));
  }
  return Trajectory<double>(1, times, states, states, {});
}

StrobeSet points(std::vector<std::vector<double>> xy) {
  StrobeSet s;
  s.dim = 2;
  for (std::size_t k = 0; k < xy.size(); ++k) {
    s.times.push_back(static_cast<double>(k));
    s.samples.insert(s.samples.end(), xy[k].begin(), xy[k].end());
  }
  return s;
}

ProblemSpec lcr_spec(double horizon, std::size_t steps) {
  ProblemSpec spec;
  spec.system = System::lcr(LcrParams{});
  spec.orders = {0.9, 0.9};
  spec.init = {{0.0}, {0.0}};
  spec.horizon = horizon;
  spec.steps = steps;
  return spec;
}

}  // namespace

TEST_CASE("Mittag-Leffler reference values") {
  // mpmath, 30 digits
  CHECK(mittag_leffler(0.9, -1.0) == doctest::Approx(0.376066021424641881).epsilon(1e-14));
  CHECK(mittag_leffler(0.5, -1.0) == doctest::Approx(0.427583576155807004).epsilon(1e-14));
  CHECK(mittag_leffler(0.9, -2.0) == doctest::Approx(0.163528300016930049).epsilon(1e-13));
  CHECK(mittag_leffler(0.7, 0.0) == 1.0);
  for (double z = -3.0; z <= 3.0; z += 0.25) {
    CHECK(std::abs(mittag_leffler(1.0, z) - std::exp(z)) <= 1e-10 * std::exp(std::abs(z)));
  }
  CHECK_THROWS_AS(mittag_leffler(1.5, -1.0), std::domain_error);
  CHECK_THROWS_AS(mittag_leffler(0.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(mittag_leffler(0.9, -6.0), std::domain_error);
}

TEST_CASE("strobing a constant trajectory") {
  const auto traj = make_traj(1000, 10.0, [](double) { return 2.5; });
  const auto s = strobe(traj, 1.0, 0.0);
  CHECK(s.size() == 11);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(s.sample(k)[0] == 2.5);
}

TEST_CASE("strobe period on the grid") {
  const auto traj = make_traj(100, 10.0, [](double t) { return t; });
  const auto s = strobe(traj, 0.5, 0.2);
  REQUIRE(s.size() == 20);
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(s.times[k] == doctest::Approx(0.2 + 0.5 * static_cast<double>(k)));
    CHECK(s.sample(k)[0] == s.times[k]);
  }
  const auto late = strobe(traj, 0.5, 0.2, 50);
  CHECK(late.times.front() >= 5.0);
  CHECK(late.size() == 10);
}

TEST_CASE("strobing a periodic signal at its period") {
  const double omega = 0.55, period = 2 * std::numbers::pi / omega;
  const auto traj = make_traj(200000, 2000.0, [](double t) { return std::sin(0.55 * t); });
  const auto s = strobe(traj, period, 0.0);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(std::abs(s.sample(k)[0]) < 0.01);
}

TEST_CASE("strobe errors") {
  const auto traj = make_traj(100, 1.0, [](double) { return 0.0; });
  CHECK_THROWS_AS(strobe(traj, 0.015, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(strobe(traj, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("re-strobing is idempotent") {
  const auto traj = make_traj(10000, 100.0, [](double t) { return std::cos(t); });
  const auto once = strobe(traj, 2.0, 0.3);
  const auto twice = strobe(once, 2.0, 0.3);
  CHECK(twice.times == once.times);
  CHECK(twice.samples == once.samples);
}

TEST_CASE("attractor statistics") {
  const auto single = attractor_stats(points({{1.0, 2.0}}));
  CHECK(single.clusters == 1);
  CHECK(single.lower == std::vector<double>{1.0, 2.0});
  CHECK_FALSE(single.spans_both_signs);

  // chain with 0.2 spacing links into one cluster
  const auto chain = attractor_stats(points({{-0.4, 0}, {-0.2, 0}, {0.0, 0}, {0.2, 0}, {0.4, 0}}));
  CHECK(chain.clusters == 1);
  CHECK(chain.spans_both_signs);
  CHECK(chain.upper[0] == 0.4);

  const auto two = points({{-1.2, 0.5}, {-1.25, 0.45}, {0.75, -0.3}, {0.8, -0.35}});
  const auto stats = attractor_stats(two);
  CHECK(stats.clusters == 2);
  CHECK(stats.spans_both_signs);
  const auto parts = cluster_stats(two);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].samples == 2);
  CHECK(parts[0].upper[0] == -1.2);
  CHECK_FALSE(parts[0].spans_both_signs);
  CHECK_FALSE(parts[1].spans_both_signs);
  CHECK(attractor_stats(two, 5.0).clusters == 1);

  CHECK_THROWS(attractor_stats(StrobeSet{}));
}

TEST_CASE("merge") {
  const auto m = merge({points({{1, 1}}), points({{2, 2}, {3, 3}})});
  CHECK(m.size() == 3);
  CHECK(m.sample(2)[1] == 3.0);
}

TEST_CASE("sweep options") {
  const auto spec = lcr_spec(20.0, 200);
  SweepOptions opt;
  const auto empty = sweep_bifurcation(spec, opt, PartitionPlan(1));
  CHECK(empty.rows.empty());

  opt.f_values = {0.1};
  opt.transient = 50;
  opt.period = 1.0;
  opt.seeds = {{0.1, 0.1}, {-0.1, -0.1}};
  const auto one = sweep_bifurcation(spec, opt, PartitionPlan(2));
  REQUIRE(one.rows.size() == 1);
  CHECK(one.rows[0].per_seed.size() == 2);
  CHECK(one.rows[0].samples.size() == one.rows[0].per_seed[0].size() * 2);
  CHECK(one.rows[0].per_seed[0].times.front() >= 5.0);

  opt.f_values = {0.2, 0.1};
  CHECK_THROWS_AS(sweep_bifurcation(spec, opt, PartitionPlan(1)), ValidationError);
  opt.f_values = {0.1};
  opt.transient = 200;
  CHECK_THROWS_AS(sweep_bifurcation(spec, opt, PartitionPlan(1)), ValidationError);

  ProblemSpec lin;
  lin.orders = {0.9};
  lin.init = {{1.0}};
  lin.horizon = 10.0;
  lin.steps = 100;
  opt.transient = 0;
  CHECK_THROWS(sweep_bifurcation(lin, opt, PartitionPlan(1)));
}

TEST_CASE("unforced circuit settles on an equilibrium") {
  const auto eq = equilibria(LcrParams{});
  SweepOptions opt;
  opt.f_values = {0.0};
  opt.transient = 10000;
  opt.seeds = {{eq.e_plus[0] + 0.01, eq.e_plus[1] + 0.01}};
  const auto table = sweep_bifurcation(lcr_spec(200.0, 20000), opt, PartitionPlan(1));
  const auto stats = attractor_stats(table.rows[0].samples);
  CHECK(stats.clusters == 1);
  CHECK(std::abs(stats.lower[0] - eq.e_plus[0]) < 0.05);
  CHECK(std::abs(stats.upper[1] - eq.e_plus[1]) < 0.05);
}

TEST_CASE("convergence study") {
  const auto study = mittag_leffler_convergence(0.9, {256, 512, 1024}, PartitionPlan(1));
  CHECK(study.reference == doctest::Approx(0.376066021424641881).epsilon(1e-14));
  REQUIRE(study.errors.size() == 3);
  CHECK(study.errors[2] < study.errors[0]);
  CHECK(study.pair_orders.size() == 2);
  CHECK(study.fitted_order > 1.5);
}
