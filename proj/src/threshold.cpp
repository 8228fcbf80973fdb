#include "lil/threshold.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lil/common.hpp"

namespace lil::threshold {
namespace {

constexpr double kLog2 = 0.6931471805599453;

}  // namespace

PositiveSequence PositiveSequence::explicit_values(std::vector<double> values) {
  if (values.size() < 2) throw std::invalid_argument("need at least 2 values");
  for (double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("sequence values must be positive");
  }
  PositiveSequence s;
  s.kind_ = Kind::Explicit;
  s.name_ = "explicit(" + std::to_string(values.size()) + ")";
  s.values_ = std::move(values);
  return s;
}

PositiveSequence PositiveSequence::from_gauge(gauges::GaugeFunction g) {
  PositiveSequence s;
  s.kind_ = Kind::FromGauge;
  s.name_ = "from_gauge[" + g.name() + "]";
  s.gauge_.push_back(std::move(g));
  return s;
}

PositiveSequence PositiveSequence::power_of_index(double beta) {
  PositiveSequence s;
  s.kind_ = Kind::PowerOfIndex;
  s.name_ = "power_of_index(" + std::to_string(beta) + ")";
  s.param_ = beta;
  return s;
}

PositiveSequence PositiveSequence::geometric(double delta) {
  PositiveSequence s;
  s.kind_ = Kind::Geometric;
  s.name_ = "geometric(" + std::to_string(delta) + ")";
  s.param_ = delta;
  return s;
}

PositiveSequence PositiveSequence::constant(double value) {
  if (!(value > 0.0)) throw std::invalid_argument("constant must be positive");
  PositiveSequence s;
  s.kind_ = Kind::Constant;
  s.name_ = "constant(" + std::to_string(value) + ")";
  s.param_ = value;
  return s;
}

double PositiveSequence::at(int k) const {
  if (k < 1) throw std::domain_error("sequence indices start at 1");
  switch (kind_) {
    case Kind::Explicit:
      if (static_cast<std::size_t>(k) > values_.size()) {
        throw std::domain_error("index beyond the explicit sequence");
      }
      return values_[k - 1];
    case Kind::FromGauge:
      return gauge_.front().at_log_scale(k * kLog2);
    case Kind::PowerOfIndex:
      return std::pow(static_cast<double>(k), param_);
    case Kind::Geometric:
      return std::exp2(param_ * k);
    case Kind::Constant:
      return param_;
  }
  return 0.0;
}

double PositiveSequence::log_at(int k) const {
  if (k < 1) throw std::domain_error("sequence indices start at 1");
  switch (kind_) {
    case Kind::PowerOfIndex:
      return param_ * std::log(static_cast<double>(k));
    case Kind::Geometric:
      return param_ * k * kLog2;
    default:
      return std::log(at(k));
  }
}

int PositiveSequence::max_index() const {
  return kind_ == Kind::Explicit ? static_cast<int>(values_.size())
                                 : std::numeric_limits<int>::max();
}

ConditionReport check_conditions(const PositiveSequence& s, int n) {
  if (n < 16) throw std::invalid_argument("condition check needs n >= 16");
  if (n > s.max_index()) throw std::invalid_argument("n beyond the sequence");
  ConditionReport rep;
  rep.monotone = true;
  rep.log_concave = true;
  // everything in log space so geometric growth cannot overflow
  double prev = s.log_at(1);
  for (int k = 2; k <= n; ++k) {
    const double cur = s.log_at(k);
    if (cur < prev - 1e-12) rep.monotone = false;
    rep.smallest_c = std::max(rep.smallest_c, std::exp(cur - prev));
    prev = cur;
  }
  for (int k = 2; k < n; ++k) {
    const double lo = s.log_at(k - 1), mid = s.log_at(k), hi = s.log_at(k + 1);
    // 1e-12 relative on the products, plus rounding slack on the logs
    const double tol =
        1e-12 + 1e-15 * (std::abs(lo) + std::abs(hi) + 2.0 * std::abs(mid));
    if (hi + lo > 2.0 * mid + tol) rep.log_concave = false;
  }
  rep.trend.reserve(n - 1);
  for (int k = 2; k <= n; ++k) {
    rep.trend.push_back(s.log_at(k) * std::log(k) / k);
  }
  // tail slope: least squares of log t against log k over the last half
  const std::size_t lo = rep.trend.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = lo; i < rep.trend.size(); ++i) {
    if (rep.trend[i] <= 0.0) continue;
    const double lx = std::log(static_cast<double>(i + 2));
    const double ly = std::log(rep.trend[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  rep.tail_slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx)
                          : std::numeric_limits<double>::quiet_NaN();
  // decreasing tail: compare the two halves of the tail window
  double early = 0.0, late = 0.0;
  const std::size_t mid = lo + (rep.trend.size() - lo) / 2;
  for (std::size_t i = lo; i < mid; ++i) early += rep.trend[i];
  for (std::size_t i = mid; i < rep.trend.size(); ++i) late += rep.trend[i];
  early /= std::max<std::size_t>(mid - lo, 1);
  late /= std::max<std::size_t>(rep.trend.size() - mid, 1);
  const double scale = std::max({std::abs(early), std::abs(late), 1e-15});
  rep.tail_decreasing = late <= early + 1e-9 * scale;
  rep.threshold_consistent =
      rep.tail_decreasing && (std::abs(late) <= std::abs(early) + 1e-15);
  return rep;
}

double improvement_ratio(const PositiveSequence& s, int n) {
  if (n < 1 || n > s.max_index()) throw std::invalid_argument("bad length");
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double a = s.at(k);
    sum += a;
    sum_sq += a * a;
  }
  return lil_denominator_value(sum_sq) / sum;
}

MultiplicativeForm multiplicative_form(const PositiveSequence& s, int n) {
  if (n < 2 || n > s.max_index()) throw std::invalid_argument("bad length");
  MultiplicativeForm out;
  out.lambda.reserve(n);
  out.lambda.push_back(0.0);  // a_0 := a_1
  double c_minus_1 = 0.0;
  double prev = s.at(1);
  for (int k = 2; k <= n; ++k) {
    const double cur = s.at(k);
    out.lambda.push_back(cur / prev - 1.0);
    c_minus_1 = std::max(c_minus_1, cur / prev - 1.0);
    prev = cur;
  }
  out.bounds_ok = true;
  out.nonincreasing_ok = true;
  for (std::size_t i = 1; i < out.lambda.size(); ++i) {
    if (out.lambda[i] < -1e-12 || out.lambda[i] > c_minus_1 + 1e-12) {
      out.bounds_ok = false;
    }
    if (i >= 2 && out.lambda[i] > out.lambda[i - 1] + 1e-12) {
      out.nonincreasing_ok = false;
    }
  }
  return out;
}

ContinuousReport continuous_threshold_check(const gauges::GaugeFunction& g,
                                            std::vector<double> ladder) {
  if (ladder.empty()) {
    for (int k = 2; k <= 7; ++k) {
      ladder.push_back(std::pow(2.0, -std::pow(2.0, k)));
    }
  }
  ContinuousReport rep;
  rep.diagnose_ok = gauges::conditions_pass(g, 48);
  rep.concavity_ok = true;
  for (double y : ladder) {
    if (!(y > 0.0) || y > 0.5) continue;
    if (g(y / 2.0) * g(std::min(2.0 * y, 1.0)) > sq(g(y)) * (1.0 + 1e-12)) {
      rep.concavity_ok = false;
    }
  }
  for (double y : ladder) {
    ThresholdPoint pt;
    pt.log_inv_y = std::log(1.0 / y);
    const double big_psi = g.square_function(y);
    if (big_psi <= kLilRegimeFloor) {
      pt.guarded = true;
    } else {
      pt.ratio = lil_denominator_value(big_psi) / g.log_weighted_integral(y);
    }
    if (pt.log_inv_y > 1.0) {
      pt.threshold_quantity =
          std::log(g(y)) * std::log(pt.log_inv_y) / pt.log_inv_y;
    }
    rep.points.push_back(pt);
  }
  // Decreasing toward zero over the ladder. Points where Psi barely clears
  // the regime floor have log log Psi ~ 0 and a deflated ratio; the trend
  // verdict only reads heights with the log log factor clear of zero.
  double prev = std::numeric_limits<double>::infinity();
  double first = -1.0, last = -1.0;
  bool monotone = true;
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    const auto& pt = rep.points[i];
    if (pt.guarded || g.square_function(ladder[i]) <= std::exp(1.3)) continue;
    if (pt.ratio > prev * (1.0 + 0.01)) monotone = false;
    prev = pt.ratio;
    if (first < 0.0) first = pt.ratio;
    last = pt.ratio;
  }
  rep.ratio_decreasing = monotone && first > 0.0 && last < 0.9 * first;
  return rep;
}

}  // namespace lil::threshold
