#pragma once

#include <functional>
#include <span>

namespace lil::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;  // accumulated error estimate
  int evals = 0;
  bool converged = true;
};

struct Options {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_depth = 48;
};

using Fn = std::function<double(double)>;

// Adaptive Gauss-Kronrod 7-15 on [a, b].
Result integrate(const Fn& f, double a, double b, Options opt = {});

// Same, but throws quadrature_error (carrying the partial value) on
// non-convergence instead of returning converged = false.
double integrate_or_throw(const Fn& f, double a, double b, Options opt = {});

// Fixed-order Gauss-Legendre (nodes cached per order).
struct GaussLegendre {
  std::span<const double> nodes;    // on (-1, 1)
  std::span<const double> weights;
};
GaussLegendre gauss_legendre(int order);

double gl_integrate(const Fn& f, double a, double b, int order);

// Integral of f over [y_lo, y_hi] via the substitution t = e^{-s}, which
// regularizes endpoint behaviour near t = 0:
//   \int f(t) dt = \int f(e^{-s}) e^{-s} ds.
Result integrate_log_substituted(const Fn& f, double y_lo, double y_hi,
                                 Options opt = {});

}  // namespace lil::quad
