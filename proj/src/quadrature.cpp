#include "lil/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "lil/common.hpp"

namespace lil::quad {
namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
  double kronrod;
  double error;
};

PanelEstimate gk15(const Fn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    resk += kWgk[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) resg += kWg[i / 2] * (fv[i] + fv[14 - i]);
  }
  resk *= h;
  resg *= h;
  double err = std::abs(resk - resg);
  // QUADPACK-style sharpening of the raw difference.
  if (err != 0.0) err = err * std::min(1.0, std::pow(200.0 * err / std::max(std::abs(resk), 1e-300), 1.5));
  return {resk, err};
}

void adapt(const Fn& f, double a, double b, double tol, int depth,
           const Options& opt, Result& out) {
  PanelEstimate e = gk15(f, a, b);
  out.evals += 15;
  const double scale = std::max(std::abs(e.kronrod), std::abs(out.value));
  if (depth >= opt.max_depth) {
    out.value += e.kronrod;
    out.abs_error += e.error;
    if (e.error > std::max(tol, opt.rel_tol * scale)) out.converged = false;
    return;
  }
  if (e.error <= std::max(tol, opt.abs_tol / 64.0)) {
    out.value += e.kronrod;
    out.abs_error += e.error;
    return;
  }
  const double c = 0.5 * (a + b);
  adapt(f, a, c, 0.5 * tol, depth + 1, opt, out);
  adapt(f, c, b, 0.5 * tol, depth + 1, opt, out);
}

}  // namespace

Result integrate(const Fn& f, double a, double b, Options opt) {
  Result out;
  if (a == b) return out;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  // First pass to scale the relative tolerance.
  PanelEstimate first = gk15(f, a, b);
  const double tol =
      std::max(opt.abs_tol, opt.rel_tol * std::abs(first.kronrod));
  adapt(f, a, b, tol, 0, opt, out);
  out.value *= sign;
  return out;
}

double integrate_or_throw(const Fn& f, double a, double b, Options opt) {
  Result r = integrate(f, a, b, opt);
  if (!r.converged) {
    throw quadrature_error("adaptive quadrature failed to converge", r.value);
  }
  return r.value;
}

GaussLegendre gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>>
      cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) {
    std::vector<double> x(order), w(order);
    // Newton iteration on P_n, seeded with the Chebyshev approximation.
    for (int i = 0; i < (order + 1) / 2; ++i) {
      double xi = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
      double p0, p1, dp;
      for (int iter = 0; iter < 100; ++iter) {
        p0 = 1.0;
        p1 = xi;
        for (int k = 2; k <= order; ++k) {
          double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = order * (xi * p1 - p0) / (xi * xi - 1.0);
        double dx = p1 / dp;
        xi -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      x[i] = -xi;
      x[order - 1 - i] = xi;
      double wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
      w[i] = wi;
      w[order - 1 - i] = wi;
    }
    it = cache.emplace(order, std::make_pair(std::move(x), std::move(w)))
             .first;
  }
  return {std::span<const double>(it->second.first),
          std::span<const double>(it->second.second)};
}

double gl_integrate(const Fn& f, double a, double b, int order) {
  GaussLegendre gl = gauss_legendre(order);
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < order; ++i) acc += gl.weights[i] * f(c + h * gl.nodes[i]);
  return acc * h;
}

Result integrate_log_substituted(const Fn& f, double y_lo, double y_hi,
                                 Options opt) {
  const double s_lo = std::log(1.0 / y_hi);
  const double s_hi = std::log(1.0 / y_lo);
  return integrate(
      [&f](double s) {
        const double t = std::exp(-s);
        return f(t) * t;
      },
      s_lo, s_hi, opt);
}

}  // namespace lil::quad
