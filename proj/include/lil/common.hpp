#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace lil {

// Guard below which sqrt(V log log V) denominators are declared undefined:
// the log log factor must be strictly positive, i.e. V > e.
inline constexpr double kLilRegimeFloor = 2.718281828459045;

// An asymptotic-regime precondition failed (e.g. a LIL denominator was
// requested where its log log factor is not yet positive).
class guard_error : public std::runtime_error {
 public:
  explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

// |f(z)| reached 1 to within rounding; hyperbolic quantities blow up.
class saturation_error : public std::runtime_error {
 public:
  saturation_error(const std::string& what, double partial)
      : std::runtime_error(what), partial_(partial) {}
  double partial() const { return partial_; }

 private:
  double partial_ = 0.0;
};

// Evaluation requested below the certified resolution of a discretized object.
class resolution_error : public std::runtime_error {
 public:
  explicit resolution_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Adaptive quadrature failed to converge; carries the partial estimate.
class quadrature_error : public std::runtime_error {
 public:
  quadrature_error(const std::string& what, double partial)
      : std::runtime_error(what), partial_(partial) {}
  double partial() const { return partial_; }

 private:
  double partial_ = 0.0;
};

// sqrt(V log log V), the universal iterated-logarithm denominator.
// Requires V > e so that log log V > 0.
inline double lil_denominator_value(double v) {
  if (!(v > kLilRegimeFloor)) {
    throw guard_error("lil denominator undefined: variance " +
                      std::to_string(v) + " <= e (height too large for LIL regime)");
  }
  return std::sqrt(v * std::log(std::log(v)));
}

inline double sq(double x) { return x * x; }

}  // namespace lil
