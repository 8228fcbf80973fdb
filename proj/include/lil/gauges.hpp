#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lil::gauges {

enum class Kind { Constant, ShiftedLogPower, PowerLaw, Tabulated };

// A positive gauge on heights y in (0, 1]. Gauges control y|grad u| (psi)
// and y^3 |grad Lap u| (epsilon); the constant kind doubles as a Bloch
// constant. The square function
//   Psi(y) = \int_y^1 psi^2(t) / t dt
// drives every iterated-logarithm denominator built from a gauge.
class GaugeFunction {
 public:
  static GaugeFunction constant(double level);
  // psi(y) = (shift + log(1/y))^(alpha - 1); shift > 0 keeps y = 1 regular.
  static GaugeFunction shifted_log_power(double alpha, double shift = 1.0);
  // psi(y) = y^(-delta), delta > 0. Values >= 1 make \int_0^y psi divergent
  // and are flagged by diagnose() rather than rejected here.
  static GaugeFunction power_law(double delta);
  // Knots as (y, value) pairs with y strictly decreasing in (0, 1]; the value
  // is interpolated linearly in log(1/y) and clamped beyond the end knots.
  static GaugeFunction tabulated(std::vector<std::pair<double, double>> knots);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  // psi(y); throws std::domain_error outside (0, 1].
  double operator()(double y) const;

  // psi(e^{-s}) for s >= 0; reaches heights far below the smallest positive
  // double (sequences a_k = psi(2^{-k}) need k well past 1074).
  double at_log_scale(double s) const;

  // Psi(y): closed form for Constant/PowerLaw, otherwise adaptive quadrature
  // (relative tolerance 1e-8) after the substitution t = e^{-s}.
  double square_function(double y) const;
  // Always the quadrature path; used to cross-check the closed forms.
  double square_function_quadrature(double y) const;

  // sqrt(Psi(y) log log Psi(y)); throws guard_error below the LIL regime.
  double lil_denominator(double y) const;

  // \int_a^b psi(t) dt, 0 <= a <= b <= 1. Throws quadrature_error if the
  // endpoint integral diverges (e.g. PowerLaw with delta >= 1 and a = 0).
  double integral(double a, double b) const;

  // \int_y^1 psi(t)/t dt.
  double log_weighted_integral(double y) const;

 private:
  GaugeFunction() = default;
  double eval_unchecked(double y) const;
  double eval_at_log(double s) const;  // psi(e^{-s}) for s >= 0

  Kind kind_ = Kind::Constant;
  std::string name_;
  double a_ = 1.0;  // Constant level / alpha / delta
  double b_ = 1.0;  // shift for ShiftedLogPower
  // Tabulated: (log(1/y), value) with log(1/y) ascending.
  std::vector<std::pair<double, double>> knots_;
};

struct GaugeDiagnostics {
  double averaging_constant = 0.0;   // sup (1/y) \int_0^y psi / psi(y)
  double doubling_constant = 0.0;    // sup psi(y/2) / psi(y)
  bool nonincreasing = false;
  bool averaging_converged = false;  // false when \int_0^y psi diverges
  std::vector<double> grid;          // sampled heights
};

// Samples the structural conditions on a geometric grid y = 2^{-k/4},
// k = 0 .. grid_size-1. Divergent averaging integrals set the failure
// flag instead of throwing. Requires grid_size >= 8.
GaugeDiagnostics diagnose(const GaugeFunction& g, int grid_size = 64);

// Conditions verdict: diagnostics finite and stable (within 1%) when the
// sampling grid is refined by a factor 2.
bool conditions_pass(const GaugeFunction& g, int grid_size = 64);

}  // namespace lil::gauges
