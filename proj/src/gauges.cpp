#include "lil/gauges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lil/common.hpp"
#include "lil/quadrature.hpp"

namespace lil::gauges {
namespace {

void check_height(double y) {
  if (!(y > 0.0) || y > 1.0) {
    throw std::domain_error("gauge evaluated outside (0,1]: y = " +
                            std::to_string(y));
  }
}

}  // namespace

GaugeFunction GaugeFunction::constant(double level) {
  if (!(level > 0.0)) throw std::invalid_argument("constant gauge must be positive");
  GaugeFunction g;
  g.kind_ = Kind::Constant;
  g.a_ = level;
  g.name_ = "constant(" + std::to_string(level) + ")";
  return g;
}

GaugeFunction GaugeFunction::shifted_log_power(double alpha, double shift) {
  if (!(shift > 0.0)) throw std::invalid_argument("shift must be positive");
  GaugeFunction g;
  g.kind_ = Kind::ShiftedLogPower;
  g.a_ = alpha;
  g.b_ = shift;
  g.name_ = "shifted_log_power(alpha=" + std::to_string(alpha) +
            ", c=" + std::to_string(shift) + ")";
  return g;
}

GaugeFunction GaugeFunction::power_law(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  GaugeFunction g;
  g.kind_ = Kind::PowerLaw;
  g.a_ = delta;
  g.name_ = "power_law(delta=" + std::to_string(delta) + ")";
  return g;
}

GaugeFunction GaugeFunction::tabulated(
    std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw std::invalid_argument("need at least 2 knots");
  GaugeFunction g;
  g.kind_ = Kind::Tabulated;
  g.name_ = "tabulated(" + std::to_string(knots.size()) + " knots)";
  double prev_y = 2.0;
  for (auto& [y, v] : knots) {
    if (!(y > 0.0) || y > 1.0) throw std::invalid_argument("knot height outside (0,1]");
    if (!(y < prev_y)) throw std::invalid_argument("knot heights must strictly decrease");
    if (!(v > 0.0)) throw std::invalid_argument("knot values must be positive");
    prev_y = y;
    g.knots_.emplace_back(std::log(1.0 / y), v);
  }
  return g;
}

double GaugeFunction::eval_at_log(double s) const {
  switch (kind_) {
    case Kind::Constant:
      return a_;
    case Kind::ShiftedLogPower:
      return std::pow(b_ + s, a_ - 1.0);
    case Kind::PowerLaw:
      return std::exp(a_ * s);
    case Kind::Tabulated: {
      if (s <= knots_.front().first) return knots_.front().second;
      if (s >= knots_.back().first) return knots_.back().second;
      auto it = std::upper_bound(
          knots_.begin(), knots_.end(), s,
          [](double lhs, const auto& k) { return lhs < k.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (s - lo.first) / (hi.first - lo.first);
      return lo.second + w * (hi.second - lo.second);
    }
  }
  return 0.0;
}

double GaugeFunction::eval_unchecked(double y) const {
  return eval_at_log(std::log(1.0 / y));
}

double GaugeFunction::operator()(double y) const {
  check_height(y);
  return eval_unchecked(y);
}

double GaugeFunction::at_log_scale(double s) const {
  if (!(s >= 0.0)) {
    throw std::domain_error("log-scale evaluation needs s >= 0");
  }
  return eval_at_log(s);
}

double GaugeFunction::square_function_quadrature(double y) const {
  check_height(y);
  const double big_l = std::log(1.0 / y);
  if (big_l == 0.0) return 0.0;
  // \int_y^1 psi^2(t)/t dt = \int_0^{log 1/y} psi(e^{-s})^2 ds.
  return quad::integrate_or_throw(
      [this](double s) { return sq(eval_at_log(s)); }, 0.0, big_l,
      {.rel_tol = 1e-8, .abs_tol = 1e-14});
}

double GaugeFunction::square_function(double y) const {
  check_height(y);
  switch (kind_) {
    case Kind::Constant:
      return a_ * a_ * std::log(1.0 / y);
    case Kind::PowerLaw: {
      const double two_delta = 2.0 * a_;
      return (std::pow(y, -two_delta) - 1.0) / two_delta;
    }
    default:
      return square_function_quadrature(y);
  }
}

double GaugeFunction::lil_denominator(double y) const {
  return lil_denominator_value(square_function(y));
}

double GaugeFunction::integral(double a, double b) const {
  if (a > b) std::swap(a, b);
  if (!(a >= 0.0) || b > 1.0) {
    throw std::domain_error("gauge integral endpoints must lie in [0,1]");
  }
  if (a == b) return 0.0;
  switch (kind_) {
    case Kind::Constant:
      return a_ * (b - a);
    case Kind::PowerLaw: {
      if (a_ < 1.0) {
        const double p = 1.0 - a_;
        return (std::pow(b, p) - std::pow(a, p)) / p;
      }
      if (a > 0.0) {
        if (a_ == 1.0) return std::log(b / a);
        const double p = 1.0 - a_;
        return (std::pow(b, p) - std::pow(a, p)) / p;
      }
      throw quadrature_error("divergent gauge integral at 0", 0.0);
    }
    default:
      break;
  }
  // \int_a^b psi(t) dt = \int psi(e^{-s}) e^{-s} ds; the integrand decays
  // exponentially for integrable gauges, so an endpoint a = 0 is handled by
  // windowed extension until the tail is negligible.
  const double s_lo = std::log(1.0 / b);
  auto f = [this](double s) { return eval_at_log(s) * std::exp(-s); };
  if (a > 0.0) {
    return quad::integrate_or_throw(f, s_lo, std::log(1.0 / a),
                                    {.rel_tol = 1e-9, .abs_tol = 1e-15});
  }
  double total = 0.0;
  double lo = s_lo, width = 4.0, last = 0.0;
  for (int window = 0; window < 64; ++window) {
    const double piece = quad::integrate_or_throw(
        f, lo, lo + width, {.rel_tol = 1e-9, .abs_tol = 1e-16});
    total += piece;
    if (window > 0 && piece >= 0.999 * last && piece > 1e-14 * total) {
      throw quadrature_error("divergent gauge integral at 0", total);
    }
    if (piece <= 1e-12 * std::max(total, 1e-300) || total == 0.0) return total;
    last = piece;
    lo += width;
  }
  throw quadrature_error("gauge integral at 0 did not stabilize", total);
}

double GaugeFunction::log_weighted_integral(double y) const {
  check_height(y);
  const double big_l = std::log(1.0 / y);
  if (big_l == 0.0) return 0.0;
  switch (kind_) {
    case Kind::Constant:
      return a_ * big_l;
    case Kind::PowerLaw:
      return (std::pow(y, -a_) - 1.0) / a_;
    default:
      return quad::integrate_or_throw(
          [this](double s) { return eval_at_log(s); }, 0.0, big_l,
          {.rel_tol = 1e-9, .abs_tol = 1e-15});
  }
}

GaugeDiagnostics diagnose(const GaugeFunction& g, int grid_size) {
  if (grid_size < 8) throw std::invalid_argument("diagnose needs grid_size >= 8");
  GaugeDiagnostics d;
  d.nonincreasing = true;
  d.averaging_converged = true;
  d.grid.reserve(grid_size);
  double sup_avg = 0.0, sup_doubling = 0.0;
  double prev_value = -1.0;
  for (int k = 0; k < grid_size; ++k) {
    const double y = std::pow(2.0, -0.25 * k);
    d.grid.push_back(y);
    const double v = g(y);
    if (prev_value >= 0.0 && v < prev_value * (1.0 - 1e-12)) {
      // grid walks downward in y, so values must not shrink
      d.nonincreasing = false;
    }
    prev_value = v;
    sup_doubling = std::max(sup_doubling, g(y / 2.0) / v);
    if (d.averaging_converged) {
      try {
        sup_avg = std::max(sup_avg, g.integral(0.0, y) / (y * v));
      } catch (const quadrature_error&) {
        d.averaging_converged = false;
        sup_avg = std::numeric_limits<double>::infinity();
      }
    }
  }
  d.averaging_constant = sup_avg;
  d.doubling_constant = sup_doubling;
  return d;
}

bool conditions_pass(const GaugeFunction& g, int grid_size) {
  GaugeDiagnostics coarse = diagnose(g, grid_size);
  if (!coarse.nonincreasing || !coarse.averaging_converged) return false;
  if (!std::isfinite(coarse.averaging_constant)) return false;
  // Refined grid: twice as many points at half the geometric spacing.
  GaugeDiagnostics fine;
  fine.nonincreasing = true;
  fine.averaging_converged = true;
  double sup_avg = 0.0;
  for (int k = 0; k < 2 * grid_size; ++k) {
    const double y = std::pow(2.0, -0.125 * k);
    try {
      sup_avg = std::max(sup_avg, g.integral(0.0, y) / (y * g(y)));
    } catch (const quadrature_error&) {
      return false;
    }
  }
  const double drift =
      std::abs(sup_avg - coarse.averaging_constant) /
      std::max(coarse.averaging_constant, 1e-300);
  return drift <= 0.01;
}

}  // namespace lil::gauges
