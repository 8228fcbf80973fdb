#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lil::disc {

using cplx = std::complex<double>;

// An analytic self-map of the unit disc with a derivative supplier.
// Hyperbolic metric normalization used throughout: density 2|dz|/(1-|z|^2),
// so d_h(0, t) = log((1+t)/(1-t)); with this choice
// |(-log(1-|f|^2)) - d_h(f, 0)| = 2 log(1+|f|) <= 2 log 2.
class DiscMap {
 public:
  static DiscMap identity();
  static DiscMap constant(cplx c);       // |c| < 1
  static DiscMap monomial(int power);    // z^k, k >= 1
  // eta * prod (z - a_k) / (1 - conj(a_k) z), |a_k| < 1, |eta| = 1
  static DiscMap blaschke(std::vector<cplx> zeros, cplx eta = 1.0);
  static DiscMap compose(DiscMap outer, DiscMap inner);

  cplx value(cplx z) const { return f_(z); }
  cplx derivative(cplx z) const { return fp_(z); }
  const std::string& kind() const { return kind_; }
  int blaschke_degree() const { return degree_; }  // 0 when not a product

 private:
  DiscMap() = default;
  std::function<cplx(cplx)> f_, fp_;
  std::string kind_;
  int degree_ = 0;
};

// Zeros drawn uniformly in the disc of radius 0.8, unimodular factor random.
DiscMap random_blaschke(int degree, std::uint64_t seed);

// d_h(z, w) = log((1+rho)/(1-rho)), rho = |z-w| / |1 - conj(z) w|.
// Throws std::domain_error on or outside the unit circle.
double hyperbolic_distance(cplx z, cplx w);

// (1-|z|^2) |f'(z)| / (1-|f(z)|^2); <= 1 by the Schwarz-Pick lemma.
// Throws saturation_error when |f(z)| is numerically 1.
double hyperbolic_derivative(const DiscMap& f, cplx z);

// A^2(f)(xi, r) = \int_0^r 4 log(1/t) |f'(t xi)|^2 / (1-|f(t xi)|^2)^2 dt.
// The integrable log singularity at t = 0 is handled by substituting
// t = e^{-s} on [0, 0.1].
double a_squared(const DiscMap& f, cplx xi, double r, double rel_tol = 1e-6);

// |d_h(f(r xi), 0) - A^2(f)(xi, r)| / sqrt(L log log L), L = log(1/(1-r)).
double lil_ratio(const DiscMap& f, cplx xi, double r);

struct BlaschkeLowerBound {
  double inf_ratio = 0.0;  // inf over directions and radii of A^2 / log(1/(1-r))
  std::vector<double> per_radius_inf;
  bool positive_and_stable = false;
};

// inf over equally spaced boundary directions of A^2 / log(1/(1-r)) along a
// radius ladder; stable when no per-radius inf drops below half the median.
BlaschkeLowerBound blaschke_lower_bound_check(const DiscMap& f,
                                              const std::vector<double>& radii,
                                              int n_directions);

}  // namespace lil::disc
