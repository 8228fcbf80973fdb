#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lil/cascade.hpp"
#include "lil/disc.hpp"
#include "lil/gauges.hpp"

namespace lil::field {

using Point = std::array<double, 2>;  // spatial coordinates; [1] unused for d=1
using Vec = std::array<double, 3>;    // d spatial components, vertical last

// A smooth function on the upper half-space with value/derivative suppliers.
// Suppliers are pure; a field may be shared freely across threads.
class ScalarField {
 public:
  int dimension() const { return d_; }
  const std::string& name() const { return name_; }
  // all four suppliers analytic (no finite-difference synthesis inside)
  bool closed_form() const { return closed_form_; }
  bool exactly_harmonic() const { return harmonic_; }
  double min_height() const { return min_height_; }

  double value(const Point& x, double y) const { return value_(x, y); }
  Vec gradient(const Point& x, double y) const { return gradient_(x, y); }
  double laplacian(const Point& x, double y) const { return laplacian_(x, y); }
  Vec laplacian_gradient(const Point& x, double y) const {
    return laplacian_gradient_(x, y);
  }

  // Derivative mode FiniteDifference: every derivative supplier is replaced
  // by central differences of step h = step_scale * y, each synthesized from
  // the next supplier down (gradient and laplacian from the value, the
  // laplacian gradient from the laplacian).
  ScalarField finite_difference_view(double step_scale = 1e-4) const;

  // built-in constructors
  static ScalarField vertical_log(int d);                  // log(1/y)
  static ScalarField vertical_log_power(int d, double alpha, double shift = 1.0);
  static ScalarField harmonic_linear(int d);               // x_1
  static ScalarField harmonic_height(int d);               // y
  // sum_k a_k e^{-2^k y} cos(2^k x), k = 1..K; d = 1
  static ScalarField lacunary_harmonic(std::vector<double> coefficients);
  // log v for a cascade Poisson extension
  static ScalarField poisson_log(
      std::shared_ptr<const cascade::PoissonExtension> v);
  // -log(1 - |f|^2) pulled to the half-plane through the Cayley map
  // (x, y) -> (x + iy - i)/(x + iy + i); d = 1
  static ScalarField disc_pull(disc::DiscMap f);

 private:
  ScalarField() = default;

  int d_ = 1;
  std::string name_;
  bool closed_form_ = true;
  bool harmonic_ = false;
  double min_height_ = 0.0;
  std::function<double(const Point&, double)> value_;
  std::function<Vec(const Point&, double)> gradient_;
  std::function<double(const Point&, double)> laplacian_;
  std::function<Vec(const Point&, double)> laplacian_gradient_;
};

// T(x,y) = u - y du/dy - \int_y^1 h (Lap u)(x,h) dh; the vertical integral
// runs through the substitution h = e^{-s} with absolute tolerance abs_tol.
double transform_T(const ScalarField& f, const Point& x, double y,
                   double abs_tol = 1e-8);

// |u(x,y) - \int_y^1 t (Lap u)(x,t) dt|, the deviation the LIL controls.
double lil_numerator(const ScalarField& f, const Point& x, double y);

// lil_numerator / sqrt(Psi(y) log log Psi(y)); guard errors as in gauges.
double lil_ratio_field(const ScalarField& f, const gauges::GaugeFunction& psi,
                       const Point& x, double y);

// \int_y^1 eps(t)/t dt: the correction-term budget for dropping the
// laplacian integral from the numerator.
double corrected_numerator(const gauges::GaugeFunction& eps, double y);

struct MembershipGrid {
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};
  int nx = 17;          // lattice points per axis
  double y_top = 1.0;
  double y_bottom = 1e-4;
  int ny = 33;          // geometric ladder size
};

struct WorstPoint {
  Point x{};
  double y = 1.0;
  double ratio = 0.0;
};

struct MembershipReport {
  double sup_gradient_ratio = 0.0;   // sup y |grad u| / psi(y)
  double sup_laplacian_ratio = 0.0;  // sup y^3 |grad Lap u| / eps(y)
  WorstPoint worst_gradient;
  WorstPoint worst_laplacian;
  bool belongs = false;              // both sups <= 1 + 1e-6
};

MembershipReport membership_check(const ScalarField& f,
                                  const gauges::GaugeFunction& psi,
                                  const gauges::GaugeFunction& eps,
                                  const MembershipGrid& grid);

// The block Q x (s, t) over a cube Q of side `side` with corner `corner`.
struct BlockRegion {
  int d = 1;
  Point corner{0.0, 0.0};
  double side = 1.0;
  double s = 0.0;
  double t = 1.0;
};
void validate(const BlockRegion& r);

// |avg_Q T(.,t) - avg_Q T(.,s) - (1/|Q|) sum_j \int_{L_j} y du/dn|.
double green_identity_residual(const ScalarField& f, const BlockRegion& r,
                               int n_quad = 64);

struct BoundCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;            // rhs - lhs
  bool hypotheses_ok = true;
};

// |avg_Q(T(.,t) - T(.,s))| <= (2d/l) \int_s^t psi.
BoundCheck vertical_variation_bound_check(const ScalarField& f,
                                          const gauges::GaugeFunction& psi,
                                          const BlockRegion& r);

// |T(z,y) - T(x,y)| <= 2 (|z-x|/y + 1) psi(y); hypotheses_ok records
// eps(y) <= psi(y) at the evaluated height.
BoundCheck horizontal_oscillation_check(const ScalarField& f,
                                        const gauges::GaugeFunction& psi,
                                        const gauges::GaugeFunction& eps,
                                        const Point& x, const Point& z,
                                        double y);

struct CubeAverage {
  double value = 0.0;
  double quad_error = 0.0;
};

// (1/|Q|) \int_Q T(x, y) dx by tensor-product Gauss-Legendre quadrature,
// order doubled until two refinements agree to rel_tol.
CubeAverage transform_cube_average(const ScalarField& f, int d,
                                   const Point& corner, double side, double y,
                                   double rel_tol = 1e-8);

struct LimitValue {
  double value = 0.0;       // avg_Q T at the proxy height
  double tail_bound = 0.0;  // certified truncation error (2d/l) \int_0^{y*} psi
  double y_star = 0.0;
  double quad_error = 0.0;
};

// T_Q, the y -> 0 limit of cube averages, approximated at
// y* = max(side * 2^{-k0}, field floor) with a certified tail bound.
LimitValue transform_limit_TQ(const ScalarField& f,
                              const gauges::GaugeFunction& psi, int d,
                              const Point& corner, double side, int k0 = 10);

}  // namespace lil::field
