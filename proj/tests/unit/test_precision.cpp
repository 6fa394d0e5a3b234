#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "fracpc/precision.hpp"

using namespace fracpc;

namespace {

ProblemSpec linear_spec(std::size_t steps) {
  ProblemSpec spec;
  spec.system = System::linear(-1.0);
  spec.orders = {0.9};
  spec.init = {{1.0}};
  spec.horizon = 10.0;
  spec.steps = steps;
  return spec;
}

}  // namespace

TEST_CASE("precision names") {
  CHECK(parse_precision("f64") == Precision::f64);
  CHECK(parse_precision("double") == Precision::f64);
  CHECK(parse_precision("extended") == Precision::extended);
  CHECK(to_string(Precision::extended) == "extended");
  CHECK_THROWS_AS(parse_precision("f16"), ValidationError);
}

TEST_CASE("host extended mode") {
  if (!extended_supported()) {
    CHECK_THROWS_AS(run_dual_precision(linear_spec(10), PartitionPlan(1),
                                       {Precision::f64, Precision::extended}),
                    UnsupportedPrecision);
    return;
  }
  CHECK(extended_digits() >= 18);
}

TEST_CASE("identical widths do not diverge") {
  const auto r = run_dual_precision(linear_spec(500), PartitionPlan(2),
                                    {Precision::f64, Precision::f64});
  CHECK(r.final_cumulative() == 0.0);
  CHECK_FALSE(r.first_exceedance.has_value());
  CHECK(r.times.size() == 501);
}

TEST_CASE("stable linear problem stays close to the extended run") {
  if (!extended_supported()) return;
  const auto r = run_dual_precision(linear_spec(20000), PartitionPlan(1),
                                    {Precision::f64, Precision::extended}, 1e-12);
  CHECK(r.final_cumulative() <= 1e-9);
  CHECK(r.final_cumulative() > 0.0);
  REQUIRE(r.divergence.size() == 20001);
  CHECK(r.divergence[0] == 0.0);
  for (std::size_t n = 1; n < r.cumulative_max.size(); ++n) {
    REQUIRE(r.cumulative_max[n] >= r.cumulative_max[n - 1]);
    REQUIRE(r.cumulative_max[n] >= r.divergence[n]);
  }
  if (r.first_exceedance) CHECK(r.divergence[*r.first_exceedance] > 1e-12);
}

TEST_CASE("threshold bookkeeping") {
  if (!extended_supported()) return;
  const auto r = run_dual_precision(linear_spec(2000), PartitionPlan(1),
                                    {Precision::f64, Precision::extended}, 0.0);
  REQUIRE(r.first_exceedance.has_value());
  for (std::size_t n = 0; n < *r.first_exceedance; ++n) CHECK(r.divergence[n] == 0.0);
  CHECK(r.threshold == 0.0);
}
