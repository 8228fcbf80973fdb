#include "lil/gauges.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "lil/common.hpp"
#include "lil/rng.hpp"

using lil::gauges::GaugeFunction;
using lil::gauges::diagnose;

namespace {

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Independent oracle: Riemann midpoint sum of \int_y^1 psi^2/t dt on
// log-spaced nodes, bypassing the adaptive quadrature entirely.
double brute_force_square_function(const GaugeFunction& g, double y,
                                   int nodes) {
  const double big_l = std::log(1.0 / y);
  const double ds = big_l / nodes;
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double s = (i + 0.5) * ds;
    const double psi = g(std::exp(-s));
    acc += psi * psi * ds;
  }
  return acc;
}

}  // namespace

TEST_CASE("gauge evaluation") {
  CHECK(GaugeFunction::constant(1.0)(0.5) == 1.0);
  CHECK(GaugeFunction::power_law(0.5)(0.25) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(GaugeFunction::shifted_log_power(0.5, 1.0)(std::exp(-3.0)) ==
        doctest::Approx(0.5).epsilon(1e-12));

  auto g = GaugeFunction::constant(1.0);
  CHECK_THROWS_AS(g(0.0), std::domain_error);
  CHECK_THROWS_AS(g(-0.1), std::domain_error);
  CHECK_THROWS_AS(g(1.5), std::domain_error);
  CHECK_NOTHROW(g(1.0));
}

TEST_CASE("tabulated gauge interpolates linearly in log(1/y)") {
  auto g = GaugeFunction::tabulated({{1.0, 2.0}, {std::exp(-2.0), 4.0}});
  CHECK(g(1.0) == doctest::Approx(2.0));
  CHECK(g(std::exp(-1.0)) == doctest::Approx(3.0).epsilon(1e-12));
  // beyond the end knots the value clamps
  CHECK(g(std::exp(-5.0)) == doctest::Approx(4.0));

  CHECK_THROWS_AS(GaugeFunction::tabulated({{0.5, 1.0}, {0.5, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GaugeFunction::tabulated({{0.5, 1.0}, {0.25, -2.0}}),
                  std::invalid_argument);
}

TEST_CASE("diagnose: averaging and doubling constants") {
  auto dc = diagnose(GaugeFunction::constant(1.0), 32);
  CHECK(dc.nonincreasing);
  CHECK(dc.averaging_converged);
  CHECK(std::abs(dc.averaging_constant - 1.0) < 1e-6);
  CHECK(std::abs(dc.doubling_constant - 1.0) < 1e-12);

  // (1/y) \int_0^y t^{-1/2} dt = 2 y^{-1/2}, so A = 2 exactly.
  auto dp = diagnose(GaugeFunction::power_law(0.5), 32);
  CHECK(dp.nonincreasing);
  CHECK(std::abs(dp.averaging_constant - 2.0) < 1e-4);

  CHECK_THROWS_AS(diagnose(GaugeFunction::constant(1.0), 4),
                  std::invalid_argument);
}

TEST_CASE("diagnose: increasing knots and divergent averaging integral") {
  auto rising = GaugeFunction::tabulated({{1.0, 1.0}, {0.25, 3.0}, {0.1, 2.0}});
  auto d = diagnose(rising, 16);
  CHECK_FALSE(d.nonincreasing);

  // delta >= 1 makes \int_0^y psi divergent: flagged, not thrown
  auto dd = diagnose(GaugeFunction::power_law(1.5), 8);
  CHECK_FALSE(dd.averaging_converged);

  CHECK_FALSE(lil::gauges::conditions_pass(rising, 16));
  CHECK(lil::gauges::conditions_pass(GaugeFunction::constant(2.0), 32));
  CHECK(lil::gauges::conditions_pass(GaugeFunction::power_law(0.5), 32));
  // alpha >= 1 grows toward the boundary and is non-increasing in y;
  // alpha < 1 decays toward the boundary and fails the monotonicity condition
  // even though it remains a valid gauge for membership and denominators.
  CHECK(lil::gauges::conditions_pass(GaugeFunction::shifted_log_power(1.5), 32));
  CHECK_FALSE(diagnose(GaugeFunction::shifted_log_power(0.5), 16).nonincreasing);
}

TEST_CASE("square function: closed forms and quadrature") {
  auto c1 = GaugeFunction::constant(1.0);
  CHECK(c1.square_function(std::exp(-4.0)) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(c1.square_function(1.0) == 0.0);
  CHECK(GaugeFunction::power_law(0.3).square_function(1.0) == 0.0);

  auto slp = GaugeFunction::shifted_log_power(0.5, 1.0);
  const double y = std::exp(-3.0);
  const double oracle = brute_force_square_function(slp, y, 1000000);
  CHECK(rel_diff(oracle, 1.3862943611198906) < 1e-5);  // sanity on the oracle
  CHECK(rel_diff(slp.square_function(y), oracle) < 1e-6);

  // closed-form and quadrature paths agree to 1e-6 relative
  for (double yy : {0.9, 0.5, 0.1, 1e-3, 1e-6}) {
    auto pl = GaugeFunction::power_law(0.25);
    CHECK(rel_diff(pl.square_function(yy), pl.square_function_quadrature(yy)) <
          1e-6);
    auto cb = GaugeFunction::constant(2.5);
    CHECK(rel_diff(cb.square_function(yy), cb.square_function_quadrature(yy)) <
          1e-6);
  }
}

TEST_CASE("lil denominator and regime guard") {
  auto c1 = GaugeFunction::constant(1.0);
  CHECK(c1.lil_denominator(std::exp(-16.0)) ==
        doctest::Approx(4.039369139929108).epsilon(1e-12));
  CHECK_THROWS_AS(c1.lil_denominator(std::exp(-2.0)), lil::guard_error);

  // Psi(2^-20) = (2^12 - 1)/0.6 = 6825 for psi = y^{-0.3}
  auto pl = GaugeFunction::power_law(0.3);
  const double y = std::pow(2.0, -20.0);
  CHECK(pl.square_function(y) == doctest::Approx(6825.0).epsilon(1e-12));
  CHECK(pl.lil_denominator(y) ==
        doctest::Approx(121.9205916814169).epsilon(1e-12));
}

TEST_CASE("gauge integrals") {
  auto c2 = GaugeFunction::constant(2.0);
  CHECK(c2.integral(0.25, 0.75) == doctest::Approx(1.0));
  CHECK(c2.integral(0.0, 0.5) == doctest::Approx(1.0));
  CHECK(c2.log_weighted_integral(std::exp(-3.0)) == doctest::Approx(6.0));

  auto pl = GaugeFunction::power_law(0.5);
  CHECK(pl.integral(0.0, 0.25) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pl.log_weighted_integral(0.25) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(GaugeFunction::power_law(1.5).integral(0.0, 0.5),
                  lil::quadrature_error);

  auto slp = GaugeFunction::shifted_log_power(0.5, 1.0);
  // \int_y^1 (1+log 1/t)^{-1/2} dt/t = 2(sqrt(1+L) - 1)
  const double big_l = 7.0;
  CHECK(slp.log_weighted_integral(std::exp(-big_l)) ==
        doctest::Approx(2.0 * (std::sqrt(1.0 + big_l) - 1.0)).epsilon(1e-8));
}

TEST_CASE("square function growth estimates on sampled grids") {
  std::vector<GaugeFunction> passing = {
      GaugeFunction::constant(1.0),
      GaugeFunction::constant(2.5),
      GaugeFunction::power_law(0.25),
      GaugeFunction::power_law(0.5),
      GaugeFunction::shifted_log_power(1.5, 1.0),
      GaugeFunction::shifted_log_power(2.0, 1.0),
  };
  for (const auto& g : passing) {
    CAPTURE(g.name());
    auto d = diagnose(g, 48);
    REQUIRE(d.averaging_converged);
    const double a_const = d.averaging_constant;
    // doubling property psi(y/2) <= 2A psi(y)
    CHECK(d.doubling_constant <= 2.0 * a_const + 1e-9);
    const double psi1 = g(1.0);
    double prev = -1.0;
    for (int k = 1; k <= 40; ++k) {
      const double y = std::pow(2.0, -0.5 * k);
      const double big_psi = g.square_function(y);
      // (a) monotone in y and >= psi(1)^2 log(1/y)
      CHECK(big_psi >= psi1 * psi1 * std::log(1.0 / y) - 1e-9);
      CHECK(big_psi >= prev - 1e-12);
      prev = big_psi;
      if (y <= 0.5) {
        // (b) Psi(y) >= (log2 / 4A^2) psi(y)^2
        CHECK(big_psi >=
              std::log(2.0) / (4.0 * a_const * a_const) * lil::sq(g(y)) - 1e-9);
        // (c) Psi(y/2) <= (1 + 16 A^4) Psi(y)
        CHECK(g.square_function(y / 2.0) <=
              (1.0 + 16.0 * std::pow(a_const, 4.0)) * big_psi + 1e-9);
      }
    }
  }
}

TEST_CASE("square function monotone for random tabulated gauges") {
  lil::rng::Stream stream(20260809ull, 1);
  std::uint64_t ctr = 0;
  for (int trial = 0; trial < 25; ++trial) {
    // random positive nonincreasing knot values on a descending height grid
    std::vector<std::pair<double, double>> knots;
    double value = 0.5 + stream.uniform(ctr++);
    double y = 1.0;
    for (int i = 0; i < 12; ++i) {
      knots.emplace_back(y, value);
      y *= 0.4 + 0.35 * stream.uniform(ctr++);
      value *= 1.0 + stream.uniform(ctr++);  // grows as y shrinks
    }
    auto g = GaugeFunction::tabulated(knots);
    double prev = -1.0;
    for (int k = 1; k <= 30; ++k) {
      const double yy = std::pow(2.0, -0.4 * k);
      const double big_psi = g.square_function(yy);
      CHECK(big_psi >= prev - 1e-12);
      prev = big_psi;
    }
  }
}
