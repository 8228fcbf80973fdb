#include "lil/field.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "lil/common.hpp"
#include "lil/quadrature.hpp"

namespace lil::field {
namespace {

double vec_norm(const Vec& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

void check_height_domain(double y) {
  if (!(y > 0.0) || y > 1.0) {
    throw std::domain_error("field operation outside 0 < y <= 1");
  }
}

}  // namespace

ScalarField ScalarField::vertical_log(int d) {
  ScalarField f;
  f.d_ = d;
  f.name_ = "vertical_log";
  f.value_ = [](const Point&, double y) { return std::log(1.0 / y); };
  f.gradient_ = [d](const Point&, double y) {
    Vec g{};
    g[d] = -1.0 / y;
    return g;
  };
  f.laplacian_ = [](const Point&, double y) { return 1.0 / (y * y); };
  f.laplacian_gradient_ = [d](const Point&, double y) {
    Vec g{};
    g[d] = -2.0 / (y * y * y);
    return g;
  };
  return f;
}

ScalarField ScalarField::vertical_log_power(int d, double alpha,
                                            double shift) {
  if (!(shift > 0.0)) throw std::invalid_argument("shift must be positive");
  ScalarField f;
  f.d_ = d;
  f.name_ = "vertical_log_power(" + std::to_string(alpha) + ")";
  const double a = alpha, c = shift;
  f.value_ = [a, c](const Point&, double y) {
    return std::pow(c + std::log(1.0 / y), a);
  };
  f.gradient_ = [a, c, d](const Point&, double y) {
    Vec g{};
    g[d] = -a * std::pow(c + std::log(1.0 / y), a - 1.0) / y;
    return g;
  };
  f.laplacian_ = [a, c](const Point&, double y) {
    const double w = c + std::log(1.0 / y);
    return a * std::pow(w, a - 2.0) * ((a - 1.0) + w) / (y * y);
  };
  f.laplacian_gradient_ = [a, c, d](const Point&, double y) {
    const double w = c + std::log(1.0 / y);
    Vec g{};
    g[d] = -a / (y * y * y) *
           ((a - 1.0) * (a - 2.0) * std::pow(w, a - 3.0) +
            3.0 * (a - 1.0) * std::pow(w, a - 2.0) +
            2.0 * std::pow(w, a - 1.0));
    return g;
  };
  return f;
}

ScalarField ScalarField::harmonic_linear(int d) {
  ScalarField f;
  f.d_ = d;
  f.name_ = "harmonic_linear";
  f.harmonic_ = true;
  f.value_ = [](const Point& x, double) { return x[0]; };
  f.gradient_ = [](const Point&, double) {
    return Vec{1.0, 0.0, 0.0};
  };
  f.laplacian_ = [](const Point&, double) { return 0.0; };
  f.laplacian_gradient_ = [](const Point&, double) { return Vec{}; };
  return f;
}

ScalarField ScalarField::harmonic_height(int d) {
  ScalarField f;
  f.d_ = d;
  f.name_ = "harmonic_height";
  f.harmonic_ = true;
  f.value_ = [](const Point&, double y) { return y; };
  f.gradient_ = [d](const Point&, double) {
    Vec g{};
    g[d] = 1.0;
    return g;
  };
  f.laplacian_ = [](const Point&, double) { return 0.0; };
  f.laplacian_gradient_ = [](const Point&, double) { return Vec{}; };
  return f;
}

ScalarField ScalarField::lacunary_harmonic(std::vector<double> coefficients) {
  if (coefficients.empty()) throw std::invalid_argument("need coefficients");
  ScalarField f;
  f.d_ = 1;
  f.name_ = "lacunary_harmonic(" + std::to_string(coefficients.size()) + ")";
  f.harmonic_ = true;
  auto coeffs = std::make_shared<const std::vector<double>>(
      std::move(coefficients));
  f.value_ = [coeffs](const Point& x, double y) {
    double u = 0.0, lambda = 2.0;
    for (double a : *coeffs) {
      u += a * std::exp(-lambda * y) * std::cos(lambda * x[0]);
      lambda *= 2.0;
    }
    return u;
  };
  f.gradient_ = [coeffs](const Point& x, double y) {
    Vec g{};
    double lambda = 2.0;
    for (double a : *coeffs) {
      const double e = a * lambda * std::exp(-lambda * y);
      g[0] -= e * std::sin(lambda * x[0]);
      g[1] -= e * std::cos(lambda * x[0]);
      lambda *= 2.0;
    }
    return g;
  };
  f.laplacian_ = [](const Point&, double) { return 0.0; };
  f.laplacian_gradient_ = [](const Point&, double) { return Vec{}; };
  return f;
}

ScalarField ScalarField::poisson_log(
    std::shared_ptr<const cascade::PoissonExtension> v) {
  if (!v) throw std::invalid_argument("null Poisson extension");
  ScalarField f;
  f.d_ = v->dimension();
  f.name_ = "poisson_log";
  f.min_height_ = v->min_height();
  const int d = f.d_;
  // cascade evaluations keep the vertical component at slot 2; field
  // suppliers keep it at slot d
  auto reshape = [d](const std::array<double, 3>& g) {
    Vec out{};
    for (int i = 0; i < d; ++i) out[i] = g[i];
    out[d] = g[2];
    return out;
  };
  f.value_ = [v](const Point& x, double y) { return std::log(v->value(x, y)); };
  f.gradient_ = [v, reshape](const Point& x, double y) {
    auto e = v->value_and_gradient(x, y);
    return reshape({e.grad[0] / e.v, e.grad[1] / e.v, e.grad[2] / e.v});
  };
  f.laplacian_ = [v](const Point& x, double y) {
    auto e = v->value_and_gradient(x, y);
    const double g2 =
        e.grad[0] * e.grad[0] + e.grad[1] * e.grad[1] + e.grad[2] * e.grad[2];
    return -g2 / (e.v * e.v);
  };
  f.laplacian_gradient_ = [v, d, reshape](const Point& x, double y) {
    auto e = v->eval2(x, y);
    const auto& g = e.grad;
    const double g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
    // hessian * gradient with the packed upper-triangle layout
    std::array<double, 3> hg{};
    if (d == 1) {
      hg[0] = e.hessian[0] * g[0] + e.hessian[1] * g[2];
      hg[2] = e.hessian[1] * g[0] + e.hessian[2] * g[2];
    } else {
      hg[0] = e.hessian[0] * g[0] + e.hessian[1] * g[1] + e.hessian[2] * g[2];
      hg[1] = e.hessian[1] * g[0] + e.hessian[3] * g[1] + e.hessian[4] * g[2];
      hg[2] = e.hessian[2] * g[0] + e.hessian[4] * g[1] + e.hessian[5] * g[2];
    }
    const double v2 = e.v * e.v;
    const double v3 = v2 * e.v;
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
      out[i] = -(2.0 * hg[i] / v2 - 2.0 * g2 * g[i] / v3);
    }
    return reshape(out);
  };
  return f;
}

ScalarField ScalarField::disc_pull(disc::DiscMap f0) {
  ScalarField f;
  f.d_ = 1;
  f.name_ = "disc_pull(" + f0.kind() + ")";
  f.closed_form_ = false;  // laplacian gradient is synthesized below
  auto fmap = std::make_shared<const disc::DiscMap>(std::move(f0));
  using cplx = std::complex<double>;
  auto cayley = [](const Point& x, double y) {
    const cplx zeta{x[0], y};
    return (zeta - cplx{0.0, 1.0}) / (zeta + cplx{0.0, 1.0});
  };
  auto cayley_deriv = [](const Point& x, double y) {
    const cplx zeta{x[0], y};
    const cplx den = zeta + cplx{0.0, 1.0};
    return cplx{0.0, 2.0} / (den * den);
  };
  f.value_ = [fmap, cayley](const Point& x, double y) {
    const cplx g = fmap->value(cayley(x, y));
    return -std::log(1.0 - std::norm(g));
  };
  f.gradient_ = [fmap, cayley, cayley_deriv](const Point& x, double y) {
    const cplx z = cayley(x, y);
    const cplx g = fmap->value(z);
    const cplx gp = fmap->derivative(z) * cayley_deriv(x, y);
    const cplx cross = std::conj(g) * gp;
    const double den = 1.0 - std::norm(g);
    Vec out{};
    out[0] = 2.0 * cross.real() / den;
    out[1] = -2.0 * cross.imag() / den;
    return out;
  };
  f.laplacian_ = [fmap, cayley, cayley_deriv](const Point& x, double y) {
    const cplx z = cayley(x, y);
    const double den = 1.0 - std::norm(fmap->value(z));
    const double gp = std::abs(fmap->derivative(z) * cayley_deriv(x, y));
    return 4.0 * gp * gp / (den * den);
  };
  // grad(Lap u) needs f''; synthesized from the closed-form laplacian
  auto lap = f.laplacian_;
  f.laplacian_gradient_ = [lap](const Point& x, double y) {
    const double h = 1e-4 * y;
    Vec out{};
    out[0] = (lap({x[0] + h, x[1]}, y) - lap({x[0] - h, x[1]}, y)) / (2 * h);
    out[2] = (lap(x, y + h) - lap(x, y - h)) / (2 * h);
    return out;
  };
  return f;
}

ScalarField ScalarField::finite_difference_view(double step_scale) const {
  if (!(step_scale > 0.0)) throw std::invalid_argument("step_scale must be positive");
  ScalarField g = *this;
  g.name_ = name_ + "+fd";
  g.closed_form_ = false;
  g.harmonic_ = false;
  auto base = std::make_shared<const ScalarField>(*this);
  const int d = d_;
  g.gradient_ = [base, step_scale, d](const Point& x, double y) {
    const double h = step_scale * y;
    Vec shaped{};
    for (int i = 0; i < d; ++i) {
      Point xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      shaped[i] = (base->value(xp, y) - base->value(xm, y)) / (2 * h);
    }
    shaped[d] = (base->value(x, y + h) - base->value(x, y - h)) / (2 * h);
    return shaped;
  };
  g.laplacian_ = [base, step_scale, d](const Point& x, double y) {
    const double h = step_scale * y;
    const double center = base->value(x, y);
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
      Point xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      acc += base->value(xp, y) + base->value(xm, y) - 2.0 * center;
    }
    acc += base->value(x, y + h) + base->value(x, y - h) - 2.0 * center;
    return acc / (h * h);
  };
  g.laplacian_gradient_ = [base, step_scale, d](const Point& x, double y) {
    const double h = step_scale * y;
    Vec shaped{};
    for (int i = 0; i < d; ++i) {
      Point xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      shaped[i] = (base->laplacian(xp, y) - base->laplacian(xm, y)) / (2 * h);
    }
    shaped[d] = (base->laplacian(x, y + h) - base->laplacian(x, y - h)) / (2 * h);
    return shaped;
  };
  return g;
}

double transform_T(const ScalarField& f, const Point& x, double y,
                   double abs_tol) {
  check_height_domain(y);
  if (y < f.min_height()) {
    throw resolution_error("transform evaluated below the field's floor");
  }
  const Vec g = f.gradient(x, y);
  const double head = f.value(x, y) - y * g[f.dimension()];
  if (f.exactly_harmonic()) return head;
  // \int_y^1 h Lap u (x,h) dh = \int_0^{log 1/y} e^{-2s} Lap u(x, e^{-s}) ds
  const double integral = quad::integrate_or_throw(
      [&f, &x](double s) {
        const double h = std::exp(-s);
        return h * h * f.laplacian(x, h);
      },
      0.0, std::log(1.0 / y), {.rel_tol = 1e-10, .abs_tol = abs_tol});
  return head - integral;
}

double lil_numerator(const ScalarField& f, const Point& x, double y) {
  check_height_domain(y);
  if (y < f.min_height()) {
    throw resolution_error("numerator evaluated below the field's floor");
  }
  double integral = 0.0;
  if (!f.exactly_harmonic()) {
    integral = quad::integrate_or_throw(
        [&f, &x](double s) {
          const double h = std::exp(-s);
          return h * h * f.laplacian(x, h);
        },
        0.0, std::log(1.0 / y), {.rel_tol = 1e-10, .abs_tol = 1e-10});
  }
  return std::abs(f.value(x, y) - integral);
}

double lil_ratio_field(const ScalarField& f, const gauges::GaugeFunction& psi,
                       const Point& x, double y) {
  return lil_numerator(f, x, y) / psi.lil_denominator(y);
}

double corrected_numerator(const gauges::GaugeFunction& eps, double y) {
  return eps.log_weighted_integral(y);
}

MembershipReport membership_check(const ScalarField& f,
                                  const gauges::GaugeFunction& psi,
                                  const gauges::GaugeFunction& eps,
                                  const MembershipGrid& grid) {
  if (grid.nx < 2 || grid.ny < 2 || !(grid.y_bottom > 0.0) ||
      grid.y_bottom > grid.y_top || grid.y_top > 1.0) {
    throw std::invalid_argument("invalid membership grid");
  }
  MembershipReport rep;
  const int d = f.dimension();
  const double ratio = grid.y_bottom / grid.y_top;
  for (int iy = 0; iy < grid.ny; ++iy) {
    const double y =
        grid.y_top * std::pow(ratio, static_cast<double>(iy) / (grid.ny - 1));
    if (y < f.min_height()) break;
    const double py = psi(y);
    const double ey = eps(y);
    const int nx2 = d == 2 ? grid.nx : 1;
    for (int i = 0; i < grid.nx; ++i) {
      for (int j = 0; j < nx2; ++j) {
        Point x{};
        x[0] = grid.lo[0] + (grid.hi[0] - grid.lo[0]) * i / (grid.nx - 1.0);
        if (d == 2) {
          x[1] = grid.lo[1] + (grid.hi[1] - grid.lo[1]) * j / (grid.nx - 1.0);
        }
        const double gr = y * vec_norm(f.gradient(x, y)) / py;
        if (gr > rep.sup_gradient_ratio) {
          rep.sup_gradient_ratio = gr;
          rep.worst_gradient = {x, y, gr};
        }
        const double lr =
            y * y * y * vec_norm(f.laplacian_gradient(x, y)) / ey;
        if (lr > rep.sup_laplacian_ratio) {
          rep.sup_laplacian_ratio = lr;
          rep.worst_laplacian = {x, y, lr};
        }
      }
    }
  }
  rep.belongs = rep.sup_gradient_ratio <= 1.0 + 1e-6 &&
                rep.sup_laplacian_ratio <= 1.0 + 1e-6;
  return rep;
}

void validate(const BlockRegion& r) {
  if (r.d != 1 && r.d != 2) throw std::invalid_argument("block dimension must be 1 or 2");
  if (!(r.side > 0.0) || r.side > 1.0) {
    throw std::invalid_argument("block side must lie in (0,1]");
  }
  if (!(r.s > 0.0) || !(r.s <= r.t) || !(r.t <= r.side)) {
    throw std::invalid_argument("block heights must satisfy 0 < s <= t <= side");
  }
}

namespace {

double cube_average_fixed(const ScalarField& f, int d, const Point& corner,
                          double side, double y, int order,
                          double inner_tol) {
  auto gl = quad::gauss_legendre(order);
  const double half = 0.5 * side;
  double acc = 0.0;
  if (d == 1) {
    for (int i = 0; i < order; ++i) {
      const Point x{corner[0] + half * (1.0 + gl.nodes[i]), 0.0};
      acc += gl.weights[i] * transform_T(f, x, y, inner_tol);
    }
    return acc * 0.5;  // divide by |Q| -> weights already on [-1,1]*half/l
  }
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      const Point x{corner[0] + half * (1.0 + gl.nodes[i]),
                    corner[1] + half * (1.0 + gl.nodes[j])};
      acc += gl.weights[i] * gl.weights[j] * transform_T(f, x, y, inner_tol);
    }
  }
  return acc * 0.25;
}

}  // namespace

CubeAverage transform_cube_average(const ScalarField& f, int d,
                                   const Point& corner, double side, double y,
                                   double rel_tol) {
  const double inner_tol = 1e-9;
  int order = 64;
  double prev = cube_average_fixed(f, d, corner, side, y, order, inner_tol);
  for (int round = 0; round < 3; ++round) {
    order *= 2;
    const double next =
        cube_average_fixed(f, d, corner, side, y, order, inner_tol);
    const double err = std::abs(next - prev);
    if (err <= rel_tol * std::max(std::abs(next), 1.0)) {
      return {next, err};
    }
    prev = next;
  }
  return {prev, std::abs(prev) * rel_tol * 10.0};
}

double green_identity_residual(const ScalarField& f, const BlockRegion& r,
                               int n_quad) {
  validate(r);
  const int d = r.d;
  const double avg_t =
      cube_average_fixed(f, d, r.corner, r.side, r.t, n_quad, 1e-10);
  const double avg_s =
      cube_average_fixed(f, d, r.corner, r.side, r.s, n_quad, 1e-10);

  auto gl = quad::gauss_legendre(n_quad);
  const double hy = 0.5 * (r.t - r.s);
  const double cy = 0.5 * (r.t + r.s);
  double lateral = 0.0;  // (1/|Q|) sum_j \int_{L_j} y du/dn
  if (d == 1) {
    for (int i = 0; i < n_quad; ++i) {
      const double y = cy + hy * gl.nodes[i];
      const double w = gl.weights[i] * hy;
      const Vec g_left = f.gradient({r.corner[0], 0.0}, y);
      const Vec g_right = f.gradient({r.corner[0] + r.side, 0.0}, y);
      lateral += w * y * (g_right[0] - g_left[0]);
    }
    lateral /= r.side;
  } else {
    const double hx = 0.5 * r.side;
    for (int i = 0; i < n_quad; ++i) {
      const double y = cy + hy * gl.nodes[i];
      const double wy = gl.weights[i] * hy * y;
      for (int j = 0; j < n_quad; ++j) {
        const double along = hx * (1.0 + gl.nodes[j]);
        const double w = wy * gl.weights[j] * hx;
        // faces x1 = const (outward normal -/+ e1)
        Vec g = f.gradient({r.corner[0], r.corner[1] + along}, y);
        lateral -= w * g[0];
        g = f.gradient({r.corner[0] + r.side, r.corner[1] + along}, y);
        lateral += w * g[0];
        // faces x2 = const (outward normal -/+ e2)
        g = f.gradient({r.corner[0] + along, r.corner[1]}, y);
        lateral -= w * g[1];
        g = f.gradient({r.corner[0] + along, r.corner[1] + r.side}, y);
        lateral += w * g[1];
      }
    }
    lateral /= r.side * r.side;
  }
  return std::abs(avg_t - avg_s - lateral);
}

BoundCheck vertical_variation_bound_check(const ScalarField& f,
                                          const gauges::GaugeFunction& psi,
                                          const BlockRegion& r) {
  validate(r);
  BoundCheck out;
  const double avg_t =
      transform_cube_average(f, r.d, r.corner, r.side, r.t).value;
  const double avg_s =
      transform_cube_average(f, r.d, r.corner, r.side, r.s).value;
  out.lhs = std::abs(avg_t - avg_s);
  out.rhs = (2.0 * r.d / r.side) * psi.integral(r.s, r.t);
  out.slack = out.rhs - out.lhs;
  out.holds = out.lhs <= out.rhs + 1e-9;
  return out;
}

BoundCheck horizontal_oscillation_check(const ScalarField& f,
                                        const gauges::GaugeFunction& psi,
                                        const gauges::GaugeFunction& eps,
                                        const Point& x, const Point& z,
                                        double y) {
  check_height_domain(y);
  BoundCheck out;
  out.lhs = std::abs(transform_T(f, z, y) - transform_T(f, x, y));
  double dist = 0.0;
  for (int i = 0; i < f.dimension(); ++i) dist += sq(z[i] - x[i]);
  dist = std::sqrt(dist);
  out.rhs = 2.0 * (dist / y + 1.0) * psi(y);
  out.slack = out.rhs - out.lhs;
  out.holds = out.lhs <= out.rhs + 1e-9;
  out.hypotheses_ok = eps(y) <= psi(y) * (1.0 + 1e-12);
  return out;
}

LimitValue transform_limit_TQ(const ScalarField& f,
                              const gauges::GaugeFunction& psi, int d,
                              const Point& corner, double side, int k0) {
  if (k0 < 1) throw std::invalid_argument("k0 must be >= 1");
  LimitValue out;
  out.y_star = std::max(side * std::pow(2.0, -k0), f.min_height());
  const CubeAverage avg =
      transform_cube_average(f, d, corner, side, out.y_star);
  out.value = avg.value;
  out.quad_error = avg.quad_error;
  out.tail_bound = (2.0 * d / side) * psi.integral(0.0, out.y_star);
  return out;
}

}  // namespace lil::field
