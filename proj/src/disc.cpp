#include "lil/disc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lil/common.hpp"
#include "lil/quadrature.hpp"
#include "lil/rng.hpp"

namespace lil::disc {
namespace {

constexpr double kSaturation = 1e-12;  // 1 - |f|^2 below this counts as 1

void check_inside(cplx z, const char* who) {
  if (!(std::norm(z) < 1.0)) {
    throw std::domain_error(std::string(who) + ": argument not inside the unit disc");
  }
}

double one_minus_sq(cplx w) { return 1.0 - std::norm(w); }

}  // namespace

DiscMap DiscMap::identity() {
  DiscMap m;
  m.kind_ = "identity";
  m.f_ = [](cplx z) { return z; };
  m.fp_ = [](cplx) { return cplx{1.0, 0.0}; };
  m.degree_ = 1;
  return m;
}

DiscMap DiscMap::constant(cplx c) {
  if (!(std::abs(c) < 1.0)) throw std::invalid_argument("constant must lie inside the disc");
  DiscMap m;
  m.kind_ = "constant";
  m.f_ = [c](cplx) { return c; };
  m.fp_ = [](cplx) { return cplx{0.0, 0.0}; };
  return m;
}

DiscMap DiscMap::monomial(int power) {
  if (power < 1) throw std::invalid_argument("monomial power must be >= 1");
  DiscMap m;
  m.kind_ = "monomial(" + std::to_string(power) + ")";
  m.f_ = [power](cplx z) { return std::pow(z, power); };
  m.fp_ = [power](cplx z) {
    return static_cast<double>(power) * std::pow(z, power - 1);
  };
  m.degree_ = power;
  return m;
}

DiscMap DiscMap::blaschke(std::vector<cplx> zeros, cplx eta) {
  for (cplx a : zeros) {
    if (!(std::abs(a) < 1.0)) throw std::invalid_argument("Blaschke zero outside the disc");
  }
  if (std::abs(std::abs(eta) - 1.0) > 1e-12) {
    throw std::invalid_argument("Blaschke factor eta must be unimodular");
  }
  DiscMap m;
  m.kind_ = "blaschke(" + std::to_string(zeros.size()) + ")";
  m.degree_ = static_cast<int>(zeros.size());
  auto factor = [](cplx z, cplx a) { return (z - a) / (1.0 - std::conj(a) * z); };
  auto factor_deriv = [](cplx z, cplx a) {
    const cplx den = 1.0 - std::conj(a) * z;
    return (1.0 - std::norm(a)) / (den * den);
  };
  m.f_ = [zeros, eta, factor](cplx z) {
    cplx acc = eta;
    for (cplx a : zeros) acc *= factor(z, a);
    return acc;
  };
  m.fp_ = [zeros, eta, factor, factor_deriv](cplx z) {
    // logarithmic-derivative sum away from zeros, product rule near them
    bool near_zero = false;
    for (cplx a : zeros) {
      if (std::abs(z - a) < 1e-6) {
        near_zero = true;
        break;
      }
    }
    if (!near_zero) {
      cplx value = eta;
      cplx logd = 0.0;
      for (cplx a : zeros) {
        value *= factor(z, a);
        logd += 1.0 / (z - a) + std::conj(a) / (1.0 - std::conj(a) * z);
      }
      return value * logd;
    }
    cplx sum = 0.0;
    for (std::size_t k = 0; k < zeros.size(); ++k) {
      cplx term = factor_deriv(z, zeros[k]);
      for (std::size_t j = 0; j < zeros.size(); ++j) {
        if (j != k) term *= factor(z, zeros[j]);
      }
      sum += term;
    }
    return eta * sum;
  };
  return m;
}

DiscMap DiscMap::compose(DiscMap outer, DiscMap inner) {
  DiscMap m;
  m.kind_ = outer.kind_ + " . " + inner.kind_;
  m.f_ = [of = outer.f_, inf_ = inner.f_](cplx z) { return of(inf_(z)); };
  m.fp_ = [ofp = outer.fp_, inf_ = inner.f_, infp = inner.fp_](cplx z) {
    return ofp(inf_(z)) * infp(z);
  };
  return m;
}

DiscMap random_blaschke(int degree, std::uint64_t seed) {
  rng::Stream s(seed, 0xB1A5);
  std::vector<cplx> zeros;
  zeros.reserve(degree);
  for (int k = 0; k < degree; ++k) {
    const double r = 0.8 * std::sqrt(s.uniform(3 * k));
    const double th = 2.0 * std::numbers::pi * s.uniform(3 * k + 1);
    zeros.emplace_back(r * std::cos(th), r * std::sin(th));
  }
  const double phi = 2.0 * std::numbers::pi * s.uniform(3 * degree + 2);
  return DiscMap::blaschke(std::move(zeros), cplx{std::cos(phi), std::sin(phi)});
}

double hyperbolic_distance(cplx z, cplx w) {
  check_inside(z, "hyperbolic_distance");
  check_inside(w, "hyperbolic_distance");
  const double rho = std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
  return std::log((1.0 + rho) / (1.0 - rho));
}

double hyperbolic_derivative(const DiscMap& f, cplx z) {
  check_inside(z, "hyperbolic_derivative");
  const double denom = one_minus_sq(f.value(z));
  if (denom <= kSaturation) {
    throw saturation_error("hyperbolic derivative saturated: |f(z)| ~ 1",
                           std::abs(f.value(z)));
  }
  return one_minus_sq(z) * std::abs(f.derivative(z)) / denom;
}

double a_squared(const DiscMap& f, cplx xi, double r, double rel_tol) {
  if (std::abs(std::abs(xi) - 1.0) > 1e-12) {
    throw std::domain_error("xi must be unimodular");
  }
  if (!(r > 0.0 && r < 1.0)) throw std::domain_error("radius must lie in (0,1)");
  double partial = 0.0;
  auto density = [&f, xi, &partial](double t) {
    const cplx z = t * xi;
    const double denom = one_minus_sq(f.value(z));
    if (denom <= kSaturation) {
      throw saturation_error("A^2 integrand saturated on the radius", partial);
    }
    const double fp = std::abs(f.derivative(z));
    return 4.0 * fp * fp / (denom * denom);
  };
  const double split = std::min(0.1, r);
  // inner piece: t = e^{-s}, integrand 4 s |f'|^2/(1-|f|^2)^2 e^{-s}
  partial += quad::integrate_or_throw(
      [&](double s) {
        const double t = std::exp(-s);
        return std::log(1.0 / t) * density(t) * t;
      },
      std::log(1.0 / split), 42.0, {.rel_tol = rel_tol, .abs_tol = 1e-14});
  if (r > split) {
    partial += quad::integrate_or_throw(
        [&](double t) { return std::log(1.0 / t) * density(t); }, split, r,
        {.rel_tol = rel_tol, .abs_tol = 1e-14});
  }
  return partial;
}

double lil_ratio(const DiscMap& f, cplx xi, double r) {
  const double big_l = std::log(1.0 / (1.0 - r));
  const double denom = lil_denominator_value(big_l);
  const double numer =
      std::abs(hyperbolic_distance(f.value(r * xi), 0.0) - a_squared(f, xi, r));
  return numer / denom;
}

BlaschkeLowerBound blaschke_lower_bound_check(const DiscMap& f,
                                              const std::vector<double>& radii,
                                              int n_directions) {
  if (f.blaschke_degree() < 1) {
    throw std::invalid_argument(
        "lower bound requires a finite Blaschke product of degree >= 1");
  }
  BlaschkeLowerBound out;
  out.inf_ratio = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    double inf_r = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_directions; ++j) {
      const double th = 2.0 * std::numbers::pi * j / n_directions;
      const cplx xi{std::cos(th), std::sin(th)};
      inf_r = std::min(inf_r, a_squared(f, xi, r) / std::log(1.0 / (1.0 - r)));
    }
    out.per_radius_inf.push_back(inf_r);
    out.inf_ratio = std::min(out.inf_ratio, inf_r);
  }
  std::vector<double> sorted = out.per_radius_inf;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  out.positive_and_stable =
      out.inf_ratio > 0.0 && out.inf_ratio >= 0.5 * median;
  return out;
}

}  // namespace lil::disc
