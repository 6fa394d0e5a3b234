#include <stdexcept>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fracpc/analysis.hpp"
#include "fracpc/solver.hpp"
#include "fracpc/systems.hpp"

using namespace fracpc;

namespace {

// Brute-force weight oracle straight from the closed forms.
struct Oracle {
  double alpha;
  double b(int n) const { return (std::pow(n + 1, alpha) - std::pow(n, alpha)) / std::tgamma(alpha + 1); }
  double a(int n) const {
    const double q = alpha + 1;
    return (std::pow(n + 2, q) - 2 * std::pow(n + 1, q) + std::pow(n, q)) / std::tgamma(alpha + 2);
  }
  double c(int n) const {
    return (std::pow(n, alpha + 1) - (n - alpha) * std::pow(n + 1, alpha)) / std::tgamma(alpha + 2);
  }
};

Problem<double> linear_problem(double alpha, double lambda, double y0, double horizon,
                               std::size_t steps) {
  ProblemSpec spec;
  spec.system = System::linear(lambda);
  spec.orders = {alpha};
  spec.init = {{y0}};
  spec.horizon = horizon;
  spec.steps = steps;
  return spec.instantiate<double>();
}

}  // namespace

TEST_CASE("taylor_term") {
  const std::vector<double> one{4.0};
  CHECK(taylor_term<double>(0.0, one, 0.5) == 4.0);
  CHECK(taylor_term<double>(3.7, one, 0.9) == 4.0);
  const std::vector<double> two{1.0, 2.0};
  CHECK(taylor_term<double>(0.5, two, 1.5) == 2.0);
  CHECK(taylor_term<double>(0.0, two, 1.5) == 1.0);
  CHECK(taylor_term<double>(0.5, two, 2.0) == 2.0);
}

TEST_CASE("predictor_step") {
  const auto w1 = build_weights<double>(1.0, 8);
  const std::vector<double> zeros(3, 0.0);
  CHECK(predictor_step<double>(2, zeros, w1, 0.1, 1.25) == 1.25);

  // forward Euler at alpha = 1
  const std::vector<double> f0{3.0};
  CHECK(predictor_step<double>(0, f0, w1, 0.1, 2.0) == doctest::Approx(2.0 + 0.1 * 3.0).epsilon(1e-15));

  const auto w = build_weights<double>(0.9, 8);
  const std::vector<double> f{1.0, 0.5, 0.25};
  const Oracle o{0.9};
  const double expected = 1.0 + std::pow(0.1, 0.9) * (o.b(2) * 1.0 + o.b(1) * 0.5 + o.b(0) * 0.25);
  const double got = predictor_step<double>(2, f, w, 0.1, 1.0);
  CHECK(got == doctest::Approx(expected).epsilon(1e-13));
  CHECK(got == doctest::Approx(1.19697979072751727).epsilon(1e-13));  // mpmath, 30 digits
}

TEST_CASE("corrector_step") {
  const auto w1 = build_weights<double>(1.0, 8);
  const std::vector<double> zeros(2, 0.0);
  CHECK(corrector_step<double>(1, zeros, 0.0, w1, 0.1, 0.75) == 0.75);

  // Heun at alpha = 1: y0 + h (f0 + f(t1, yP)) / 2
  const std::vector<double> f0{3.0};
  CHECK(corrector_step<double>(0, f0, 5.0, w1, 0.1, 2.0) ==
        doctest::Approx(2.0 + 0.1 * 0.5 * (3.0 + 5.0)).epsilon(1e-15));

  // Two steps of D^0.9 y = -y, y0 = 1, h = 0.1, against brute force.
  const double alpha = 0.9, h = 0.1, ha = std::pow(h, alpha), g2 = std::tgamma(alpha + 2);
  const Oracle o{alpha};
  const double fa = -1.0;
  const double yp1 = 1 + ha * o.b(0) * fa;
  const double y1 = 1 + ha * (o.c(0) * fa - yp1 / g2);
  const double fb = -y1;
  const double yp2 = 1 + ha * (o.b(1) * fa + o.b(0) * fb);
  const double y2 = 1 + ha * (o.c(1) * fa + o.a(0) * fb - yp2 / g2);
  CHECK(y2 == doctest::Approx(0.786010146324570126).epsilon(1e-13));  // mpmath

  const auto w = build_weights<double>(alpha, 8);
  const std::vector<double> hist{fa, fb};
  const double pred = predictor_step<double>(1, hist, w, h, 1.0);
  CHECK(pred == doctest::Approx(yp2).epsilon(1e-13));
  CHECK(corrector_step<double>(1, hist, -pred, w, h, 1.0) == doctest::Approx(y2).epsilon(1e-13));

  const auto traj = solve_sequential(linear_problem(alpha, -1.0, 1.0, 0.2, 2));
  CHECK(traj.state(1)[0] == doctest::Approx(y1).epsilon(1e-13));
  CHECK(traj.state(2)[0] == doctest::Approx(y2).epsilon(1e-13));
}

TEST_CASE("zero rhs keeps the initial state") {
  ProblemSpec spec;
  spec.system = System::linear(0.0);
  spec.orders = {0.9};
  spec.init = {{3.0}};
  spec.horizon = 5.0;
  spec.steps = 200;
  const auto traj = solve_sequential(spec.instantiate<double>());
  for (std::size_t n = 0; n <= 200; ++n) CHECK(traj.state(n)[0] == 3.0);
}

TEST_CASE("grid and cached rhs values") {
  const auto p = linear_problem(0.8, -2.0, 1.0, 3.0, 30);
  const auto traj = solve_sequential(p, {.keep_predicted = true});
  REQUIRE(traj.size() == 31);
  for (std::size_t n = 0; n <= 30; ++n) {
    CHECK(traj.times()[n] == static_cast<double>(n) * 3.0 / 30.0);
    CHECK(traj.rhs_value(n)[0] == -2.0 * traj.state(n)[0]);
  }
  CHECK(traj.has_predicted());
  CHECK(traj.predicted(0)[0] == 1.0);
  CHECK(traj.predicted(5)[0] != traj.state(5)[0]);
}

TEST_CASE("linear relaxation against the Mittag-Leffler oracle") {
  const auto traj = solve_sequential(linear_problem(0.9, -1.0, 1.0, 1.0, 1u << 12));
  CHECK(std::abs(traj.state(1u << 12)[0] - 0.37606602142464188) < 1e-3);
}

TEST_CASE("alpha = 1 reproduces the exponential") {
  const auto traj = solve_sequential(linear_problem(1.0, 1.0, 1.0, 1.0, 10000));
  CHECK(std::abs(traj.state(10000)[0] - std::numbers::e) < 1e-4);
}

TEST_CASE("orders above one use two initial values") {
  // D^1.5 y = 1, y(0) = 1, y'(0) = 2  =>  y = 1 + 2t + t^1.5 / Gamma(2.5)
  ProblemSpec spec;
  spec.system = System::expression(parse_rhs(std::vector<std::string>{"1"}));
  spec.orders = {1.5};
  spec.init = {{1.0, 2.0}};
  spec.horizon = 1.0;
  spec.steps = 400;
  const auto traj = solve_sequential(spec.instantiate<double>());
  const double exact = 1.0 + 2.0 + 1.0 / std::tgamma(2.5);
  CHECK(traj.state(400)[0] == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("each component uses its own order") {
  // Decoupled system: must equal two independent scalar solves bit for bit.
  for (const auto& orders : {std::vector<double>{0.6, 0.95}, std::vector<double>{0.8, 0.8}}) {
    ProblemSpec spec;
    spec.system = System::linear(-0.7, 2);
    spec.orders = orders;
    spec.init = {{1.0}, {-2.0}};
    spec.horizon = 4.0;
    spec.steps = 777;
    const auto both = solve_sequential(spec.instantiate<double>());
    for (std::size_t i = 0; i < 2; ++i) {
      const auto single = solve_sequential(linear_problem(orders[i], -0.7, spec.init[i][0], 4.0, 777));
      for (std::size_t n = 0; n <= 777; ++n) REQUIRE(both.state(n)[i] == single.state(n)[0]);
    }
  }
}

TEST_CASE("equal orders share one weight table") {
  ProblemSpec spec;
  spec.system = System::lcr(LcrParams{});
  spec.orders = {0.9, 0.9};
  spec.init = {{0.1}, {0.2}};
  spec.horizon = 1.0;
  spec.steps = 10;
  const Scheme<double> shared(spec.instantiate<double>());
  CHECK(shared.distinct_tables() == 1);
  CHECK(&shared.table(0) == &shared.table(1));
  spec.orders = {0.9, 0.8};
  const Scheme<double> split(spec.instantiate<double>());
  CHECK(split.distinct_tables() == 2);
}

TEST_CASE("non-finite states abort with the last valid index") {
  // y' = y^2, y(0) = 1 blows up at t = 1
  ProblemSpec spec;
  spec.system = System::expression(parse_rhs(std::vector<std::string>{"y1^2"}));
  spec.orders = {1.0};
  spec.init = {{1.0}};
  spec.horizon = 3.0;
  spec.steps = 3000;
  try {
    (void)solve_sequential(spec.instantiate<double>());
    FAIL("expected NonFiniteState");
  } catch (const NonFiniteState& e) {
    CHECK(e.last_valid() > 900);
    CHECK(e.last_valid() < 3000);
    CHECK(e.component() == 0);
  }
}

TEST_CASE("problem validation names the field") {
  auto p = linear_problem(0.9, -1.0, 1.0, 1.0, 10);
  p.orders = {1.5};
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("init[0]"), ValidationError);
  p = linear_problem(0.9, -1.0, 1.0, 1.0, 10);
  p.horizon = -1.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("horizon"), ValidationError);
  p = linear_problem(0.9, -1.0, 1.0, 1.0, 10);
  p.steps = 0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("steps"), ValidationError);
  p = linear_problem(0.9, -1.0, 1.0, 1.0, 10);
  p.orders = {2.5};
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("orders"), ValidationError);
}

TEST_CASE("history capacity is fixed") {
  History<double> h(1, 2);
  const double v = 1.0;
  h.append({&v, 1});
  h.append({&v, 1});
  CHECK_THROWS_AS(h.append({&v, 1}), std::length_error);
}
