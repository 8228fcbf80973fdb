#include "lil/martingale.hpp"

#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "lil/common.hpp"
#include "lil/rng.hpp"

using namespace lil::martingale;
using lil::field::ScalarField;
using lil::gauges::GaugeFunction;

namespace {

double unit_scale(int) { return 1.0; }

}  // namespace

TEST_CASE("dyadic towers") {
  auto t = tower(1, {0.3, 0.0}, 2);
  REQUIRE(t.size() == 3);
  CHECK(t[0].corner()[0] == 0.0);
  CHECK(t[0].side() == 1.0);
  CHECK(t[1].corner()[0] == 0.0);
  CHECK(t[1].side() == 0.5);
  CHECK(t[2].corner()[0] == 0.25);
  CHECK(t[2].side() == 0.25);
  for (const auto& q : t) CHECK(q.contains({0.3, 0.0}));

  auto left = tower(1, {0.0, 0.0}, 4);
  for (const auto& q : left) CHECK(q.index[0] == 1);

  auto t2 = tower(2, {0.6, 0.1}, 1);
  CHECK(t2[1].index[0] == 2);
  CHECK(t2[1].index[1] == 1);
  CHECK(t2[1].corner()[0] == 0.5);
  CHECK(t2[1].corner()[1] == 0.0);

  CHECK_THROWS_AS(tower(1, {1.0, 0.0}, 2), std::domain_error);
  CHECK_THROWS_AS(tower(1, {-0.1, 0.0}, 2), std::domain_error);
}

TEST_CASE("random signed martingale: exact structure") {
  auto m = DyadicMartingale::random_signed(1, 10, unit_scale, 7);
  lil::rng::Stream s(71, 1);
  for (int i = 0; i < 50; ++i) {
    const Point x{s.uniform(i), 0.0};
    // unit increments and exact quadratic variation n
    for (int k = 1; k <= 10; ++k) {
      CHECK(std::abs(m.increment(x, k)) == doctest::Approx(1.0));
      CHECK(m.quadratic_variation(x, k) == doctest::Approx(k).epsilon(1e-15));
    }
    // T_4 is a sum of four unit signs: even integer in [-4, 4]
    const double t4 = m.value_at(x, 4);
    CHECK(std::abs(t4) <= 4.0);
    CHECK(std::fmod(std::abs(t4), 2.0) == doctest::Approx(0.0));
  }
  CHECK(m.max_mean_defect_excess() <= 0.0);  // mean property exact

  // geometric scales: <T>_inf <= sum 4^{-k} = 1/3
  auto g = DyadicMartingale::random_signed(
      1, 16, [](int k) { return std::pow(2.0, -k); }, 3);
  const double qv = g.quadratic_variation({0.7, 0.0}, 16);
  CHECK(qv <= 1.0 / 3.0 + 1e-12);
  CHECK(qv == doctest::Approx((1.0 - std::pow(0.25, 16)) / 3.0).epsilon(1e-12));

  // d = 2 zero-sum signs keep the mean property exact
  auto m2 = DyadicMartingale::random_signed(2, 5, unit_scale, 11);
  CHECK(m2.max_mean_defect_excess() <= 0.0);
  CHECK(m2.quadratic_variation({0.3, 0.8}, 5) == doctest::Approx(5.0));

  CHECK_THROWS_AS(DyadicMartingale::random_signed(1, 30, unit_scale, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(DyadicMartingale::random_signed(2, 13, unit_scale, 1),
                  std::invalid_argument);
}

TEST_CASE("explicit martingale from leaves") {
  auto m = DyadicMartingale::from_leaves(1, 2, {4.0, 0.0, 2.0, 6.0});
  DyadicCube root{1, 0, {1, 1}};
  CHECK(m.value(root) == doctest::Approx(3.0));
  CHECK(m.value_at({0.1, 0.0}, 2) == doctest::Approx(4.0));
  CHECK(m.value_at({0.3, 0.0}, 2) == doctest::Approx(0.0));
  CHECK(m.mean_defect(root) == 0.0);
  CHECK(m.quadratic_variation({0.1, 0.0}, 1) ==
        doctest::Approx(1.0));  // children 2, 4 around 3
}

TEST_CASE("path sampler matches the stored tree") {
  const std::uint64_t seed = 99;
  auto m = DyadicMartingale::random_signed(1, 18, unit_scale, seed);
  for (std::uint64_t pid : {0ull, 1ull, 17ull}) {
    RandomSignedPath path(unit_scale, seed, pid);
    for (int n = 1; n <= 18; ++n) {
      path.step();
      const double from_tree = m.value_at({path.x(), 0.0}, n);
      REQUIRE(path.value() == from_tree);
      REQUIRE(path.qv() == doctest::Approx(n));
    }
  }
}

TEST_CASE("martingale lil ratio and guard") {
  auto m = DyadicMartingale::random_signed(1, 12, unit_scale, 5);
  const Point x{0.42, 0.0};
  CHECK_THROWS_AS(m.lil_ratio(x, 2), lil::guard_error);  // <T>_2 = 2 <= e
  const double r = m.lil_ratio(x, 12);
  CHECK(r == doctest::Approx(std::abs(m.value_at(x, 12)) /
                             std::sqrt(12.0 * std::log(std::log(12.0)))));

  // constant martingale has zero quadratic variation: always guarded
  auto vlog = ScalarField::vertical_log(1);
  auto constant =
      DyadicMartingale::from_field(vlog, GaugeFunction::constant(1.0), 4);
  CHECK_THROWS_AS(constant.lil_ratio(x, 4), lil::guard_error);
}

TEST_CASE("empirical LIL for unit random walks") {
  // 400 paths to n = 2^12: none of the running ratios strays above 3.0
  // (expected exceedance probability per path is ~1e-4), and the median
  // terminal ratio sits inside [0.2, 2.0]
  const int n_max = 1 << 12;
  std::vector<double> terminal;
  int exceed = 0;
  for (int pid = 0; pid < 400; ++pid) {
    auto st = simulate_path(unit_scale, 20260809, pid, n_max, 1 << 10);
    REQUIRE_FALSE(st.terminal_guarded);
    terminal.push_back(st.terminal_ratio);
    if (st.max_ratio_in_window > 3.0) ++exceed;
  }
  std::sort(terminal.begin(), terminal.end());
  const double median = terminal[terminal.size() / 2];
  CHECK(median >= 0.2);
  CHECK(median <= 2.0);
  CHECK(exceed <= 4);  // < 1%
}

TEST_CASE("field-induced martingales reproduce the cube averages") {
  // u(x,y) = x: T = x and every cube value is the midpoint of the cube
  auto lin = ScalarField::harmonic_linear(1);
  auto c1 = GaugeFunction::constant(1.0);
  auto m = DyadicMartingale::from_field(lin, c1, 2);
  DyadicCube q{1, 2, {3, 1}};  // [1/2, 3/4)
  CHECK(m.value(q) == doctest::Approx(0.625).epsilon(1e-10));
  CHECK(m.max_mean_defect_excess() <= 0.0);

  // u = log(1/y): T = 1 and the martingale is constant
  auto vlog = ScalarField::vertical_log(1);
  auto mc = DyadicMartingale::from_field(vlog, c1, 3);
  CHECK(mc.value_at({0.9, 0.0}, 3) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(mc.quadratic_variation({0.9, 0.0}, 3) <= 1e-12);

  // lacunary field at a small depth: defect within the certified tolerance
  auto lac = ScalarField::lacunary_harmonic(std::vector<double>(6, 1.0));
  lil::field::MembershipGrid grid;
  grid.y_bottom = 1e-3;
  auto fit = lil::field::membership_check(lac, c1, c1, grid);
  auto c_lac = GaugeFunction::constant(fit.sup_gradient_ratio * 1.01);
  auto ml = DyadicMartingale::from_field(lac, c_lac, 8);
  CHECK(ml.max_mean_defect_excess() <= 0.0);

  auto inc = increment_bound_check(ml, c_lac);
  CHECK(inc.holds);
  auto close = closeness_check(ml, lac, c_lac);
  CHECK(close.holds);

  // constant martingale: zero increments sit under any bound
  auto inc0 = increment_bound_check(mc, c1);
  CHECK(inc0.holds);
  CHECK(inc0.fitted_constant <= 1e-7);
}

TEST_CASE("martingale induced by a cascade logarithm") {
  auto plog = ScalarField::poisson_log(
      std::make_shared<const lil::cascade::PoissonExtension>(
          lil::cascade::CascadeMeasure(1, {0.7, 0.3}, 8, 1)));
  lil::field::MembershipGrid grid;
  grid.lo = {0.0, 0.0};
  grid.hi = {1.0, 1.0};
  grid.y_bottom = plog.min_height();
  auto c1 = GaugeFunction::constant(1.0);
  const auto fit = lil::field::membership_check(plog, c1, c1, grid);
  auto harnack = GaugeFunction::constant(fit.sup_gradient_ratio * 1.01);

  auto m = DyadicMartingale::from_field(plog, harnack, 3, 2);
  CHECK(m.max_mean_defect_excess() <= 0.0);
  CHECK(increment_bound_check(m, harnack).holds);
  CHECK(closeness_check(m, plog, harnack).holds);
}

TEST_CASE("gauge-scaled random martingale stays in the LIL regime") {
  // s_k = psi(2^{-k}) for the boundary gauge psi = (1 + log 1/y)^{-1/2};
  // the running ratio is checked wherever the regime guard admits it
  auto slp = GaugeFunction::shifted_log_power(0.5, 1.0);
  auto scales = [&slp](int k) { return slp.at_log_scale(k * std::log(2.0)); };
  // The quadratic variation grows only like log n here, so the window sits
  // right at the edge of the regime guard where log log <T> is small and
  // the ratio runs hot; a hard 3.0 cap on every path is not attainable at
  // any seed. Bound the exceedance fraction and the median instead.
  int defined = 0, exceed = 0;
  std::vector<double> terminal;
  for (int pid = 0; pid < 500; ++pid) {
    RandomSignedPath path(scales, 424242, pid);
    double path_sup = 0.0;
    for (int n = 1; n <= (1 << 16); ++n) {
      path.step();
      if (n >= (1 << 10) && path.ratio_defined()) {
        ++defined;
        path_sup = std::max(path_sup, path.lil_ratio());
      }
    }
    if (path_sup > 3.0) ++exceed;
    terminal.push_back(path.lil_ratio());
  }
  CHECK(defined > 0);
  CHECK(exceed <= 10);  // <= 2% of paths
  std::sort(terminal.begin(), terminal.end());
  CHECK(terminal[terminal.size() / 2] <= 1.5);
}
