#pragma once

#include <string>
#include <vector>

#include "lil/gauges.hpp"

namespace lil::threshold {

// A positive sequence a_1, a_2, ...: explicit, parametric, or sampled from
// a gauge along the dyadic ladder a_k = psi(2^{-k}).
class PositiveSequence {
 public:
  static PositiveSequence explicit_values(std::vector<double> values);
  static PositiveSequence from_gauge(gauges::GaugeFunction g);
  static PositiveSequence power_of_index(double beta);  // a_k = k^beta
  static PositiveSequence geometric(double delta);      // a_k = 2^{delta k}
  static PositiveSequence constant(double value = 1.0);

  double at(int k) const;      // k >= 1
  double log_at(int k) const;  // log a_k, finite even where a_k overflows
  int max_index() const;       // bounded for explicit sources
  const std::string& name() const { return name_; }

 private:
  PositiveSequence() = default;
  enum class Kind { Explicit, FromGauge, PowerOfIndex, Geometric, Constant };
  Kind kind_ = Kind::Constant;
  std::string name_;
  double param_ = 1.0;
  std::vector<double> values_;
  std::vector<gauges::GaugeFunction> gauge_;  // 0 or 1 element
};

struct ConditionReport {
  bool monotone = false;        // a_n <= a_{n+1}
  double smallest_c = 0.0;      // smallest C with a_{n+1} <= C a_n
  bool log_concave = false;     // a_{n+1} a_{n-1} <= a_n^2
  std::vector<double> trend;    // t_n = log a_n * log n / n, n = 2..
  double tail_slope = 0.0;      // LS slope of log t_n vs log n over the
                                // last half (NaN when t is not positive)
  bool tail_decreasing = false;
  bool threshold_consistent = false;  // verdict on the o(n / log n) condition
};

// Checks the three discrete self-improvement conditions on a_1..a_n (n >= 16).
ConditionReport check_conditions(const PositiveSequence& s, int n);

// sqrt((sum a_k^2) log log (sum a_k^2)) / sum a_k; guard on sum a_k^2.
double improvement_ratio(const PositiveSequence& s, int n);

struct MultiplicativeForm {
  std::vector<double> lambda;  // lambda_1 = 0 (a_0 := a_1), lambda_k = a_k/a_{k-1} - 1
  bool bounds_ok = false;      // 0 <= lambda_n <= C - 1
  bool nonincreasing_ok = false;  // lambda_n >= lambda_{n+1} from n = 2
};

MultiplicativeForm multiplicative_form(const PositiveSequence& s, int n);

struct ThresholdPoint {
  double log_inv_y = 0.0;   // log(1/y)
  double ratio = 0.0;       // sqrt(Psi log log Psi) / \int_y^1 psi/t dt
  double threshold_quantity = 0.0;  // log psi(y) * log log(1/y) / log(1/y)
  bool guarded = false;     // Psi still below the LIL regime at this height
};

struct ContinuousReport {
  std::vector<ThresholdPoint> points;
  bool diagnose_ok = false;
  bool concavity_ok = false;  // psi(y/2) psi(2y) <= psi(y)^2 on the ladder
  bool ratio_decreasing = false;  // toward 0 along the unguarded ladder
};

// Default ladder y = 2^{-2^k}, k = 2..7 when `ladder` is empty.
ContinuousReport continuous_threshold_check(const gauges::GaugeFunction& g,
                                            std::vector<double> ladder = {});

}  // namespace lil::threshold
