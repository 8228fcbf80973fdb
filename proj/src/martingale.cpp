#include "lil/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lil/common.hpp"
#include "lil/quadrature.hpp"
#include "lil/rng.hpp"

namespace lil::martingale {
namespace {

constexpr std::uint64_t kTreeTag = 0xC0BE;

// zero-sum sign vectors over the 2^d children of one cube
void child_signs(int d, const rng::Stream& cube_stream, int* signs) {
  if (d == 1) {
    const int c = static_cast<int>(cube_stream.below(0, 2));
    signs[0] = c == 0 ? 1 : -1;
    signs[1] = -signs[0];
    return;
  }
  // d = 2: choose which two of the four children get +1
  static constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3},
                                       {1, 2}, {1, 3}, {2, 3}};
  const int c = static_cast<int>(cube_stream.below(0, 6));
  for (int j = 0; j < 4; ++j) signs[j] = -1;
  signs[kPairs[c][0]] = 1;
  signs[kPairs[c][1]] = 1;
}

void check_point(int d, const Point& x) {
  for (int i = 0; i < d; ++i) {
    if (!(x[i] >= 0.0) || x[i] >= 1.0) {
      throw std::domain_error("point outside the unit cube Q0");
    }
  }
}

void check_resolution(int d, int depth) {
  if (depth < 1 || d * depth > 24) {
    throw std::invalid_argument(
        "martingale tree resolution cap exceeded (need d * depth <= 24)");
  }
}

}  // namespace

double DyadicCube::side() const { return std::pow(2.0, -generation); }

Point DyadicCube::corner() const {
  const double h = side();
  Point p{};
  for (int i = 0; i < d; ++i) p[i] = (index[i] - 1.0) * h;
  return p;
}

bool DyadicCube::contains(const Point& x) const {
  const double h = side();
  for (int i = 0; i < d; ++i) {
    const double lo = (index[i] - 1.0) * h;
    if (!(x[i] >= lo && x[i] < lo + h)) return false;
  }
  return true;
}

std::vector<DyadicCube> tower(int d, const Point& x, int n) {
  check_point(d, x);
  std::vector<DyadicCube> out;
  out.reserve(n + 1);
  for (int g = 0; g <= n; ++g) {
    DyadicCube q;
    q.d = d;
    q.generation = g;
    for (int i = 0; i < d; ++i) {
      q.index[i] =
          static_cast<std::uint32_t>(std::floor(std::ldexp(x[i], g))) + 1;
    }
    out.push_back(q);
  }
  return out;
}

std::size_t DyadicMartingale::flat(const DyadicCube& q) const {
  const std::size_t side = std::size_t{1} << q.generation;
  std::size_t idx = q.index[0] - 1;
  if (d_ == 2) idx += side * (q.index[1] - 1);
  return idx;
}

double DyadicMartingale::value(const DyadicCube& q) const {
  if (q.d != d_ || q.generation > depth_) {
    throw std::domain_error("cube outside the martingale's tree");
  }
  return values_[q.generation][flat(q)];
}

double DyadicMartingale::value_at(const Point& x, int n) const {
  if (n > depth_) throw std::domain_error("generation beyond depth");
  auto tw = tower(d_, x, n);
  return value(tw[n]);
}

double DyadicMartingale::increment(const Point& x, int k) const {
  if (k < 1) throw std::domain_error("increments start at k = 1");
  return value_at(x, k) - value_at(x, k - 1);
}

double DyadicMartingale::quadratic_variation(const Point& x, int n) const {
  if (n > depth_) throw std::domain_error("generation beyond depth");
  auto tw = tower(d_, x, n);
  const double inv_children = std::pow(2.0, -d_);
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double parent_value = values_[k - 1][flat(tw[k - 1])];
    DyadicCube child = tw[k - 1];
    child.generation = k;
    double level = 0.0;
    const int n2 = d_ == 2 ? 2 : 1;
    for (int b1 = 0; b1 < 2; ++b1) {
      for (int b2 = 0; b2 < n2; ++b2) {
        child.index[0] = 2 * tw[k - 1].index[0] - 1 + b1;
        child.index[1] = d_ == 2 ? 2 * tw[k - 1].index[1] - 1 + b2 : 1;
        level += sq(values_[k][flat(child)] - parent_value);
      }
    }
    acc += inv_children * level;
  }
  return acc;
}

double DyadicMartingale::lil_ratio(const Point& x, int n) const {
  const double qv = quadratic_variation(x, n);
  return std::abs(value_at(x, n)) / lil_denominator_value(qv);
}

double DyadicMartingale::mean_defect(const DyadicCube& q) const {
  if (q.generation >= depth_) {
    throw std::domain_error("mean defect needs an internal node");
  }
  DyadicCube child = q;
  child.generation = q.generation + 1;
  double mean = 0.0;
  const int n2 = d_ == 2 ? 2 : 1;
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < n2; ++b2) {
      child.index[0] = 2 * q.index[0] - 1 + b1;
      child.index[1] = d_ == 2 ? 2 * q.index[1] - 1 + b2 : 1;
      mean += values_[child.generation][flat(child)];
    }
  }
  mean *= std::pow(2.0, -d_);
  return std::abs(value(q) - mean);
}

double DyadicMartingale::node_tolerance(const DyadicCube& q) const {
  if (tol_.empty()) return 0.0;
  return tol_[q.generation][flat(q)];
}

double DyadicMartingale::max_mean_defect_excess() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < depth_; ++g) {
    DyadicCube q;
    q.d = d_;
    q.generation = g;
    const std::uint32_t side = 1u << g;
    const std::uint32_t n2 = d_ == 2 ? side : 1;
    for (std::uint32_t i1 = 1; i1 <= side; ++i1) {
      for (std::uint32_t i2 = 1; i2 <= n2; ++i2) {
        q.index = {i1, i2};
        const double tol =
            tol_.empty() ? 1e-12 : tol_[q.generation][flat(q)];
        worst = std::max(worst, mean_defect(q) - tol);
      }
    }
  }
  return worst;
}

DyadicMartingale DyadicMartingale::random_signed(
    int d, int depth, std::function<double(int)> scales, std::uint64_t seed) {
  if (d != 1 && d != 2) throw std::invalid_argument("dimension must be 1 or 2");
  check_resolution(d, depth);
  DyadicMartingale m;
  m.d_ = d;
  m.depth_ = depth;
  m.source_ = Source::RandomSigned;
  m.values_.resize(depth + 1);
  m.values_[0] = {0.0};
  std::vector<std::uint64_t> states{rng::Stream(seed, kTreeTag).key()};
  const int children = 1 << d;
  for (int g = 1; g <= depth; ++g) {
    const double s = scales(g);
    if (!(s > 0.0)) throw std::invalid_argument("scales must be positive");
    const std::size_t parent_count = m.values_[g - 1].size();
    const std::size_t parent_side = std::size_t{1} << (g - 1);
    const std::size_t child_side = parent_side << 1;
    m.values_[g].resize(d == 1 ? child_side : child_side * child_side);
    std::vector<std::uint64_t> child_states(m.values_[g].size());
    int signs[4];
    for (std::size_t p = 0; p < parent_count; ++p) {
      child_signs(d, rng::Stream(states[p]), signs);
      const std::size_t p1 = d == 1 ? p : p % parent_side;
      const std::size_t p2 = d == 1 ? 0 : p / parent_side;
      for (int code = 0; code < children; ++code) {
        const std::size_t c1 = 2 * p1 + (code & 1);
        const std::size_t c2 = 2 * p2 + ((code >> 1) & 1);
        const std::size_t idx = d == 1 ? c1 : c1 + child_side * c2;
        m.values_[g][idx] = m.values_[g - 1][p] + s * signs[code];
        child_states[idx] =
            rng::derive(states[p], static_cast<std::uint64_t>(code));
      }
    }
    states.swap(child_states);
  }
  return m;
}

DyadicMartingale DyadicMartingale::from_leaves(int d, int depth,
                                               std::vector<double> leaves) {
  if (d != 1 && d != 2) throw std::invalid_argument("dimension must be 1 or 2");
  check_resolution(d, depth);
  const std::size_t expected = std::size_t{1} << (d * depth);
  if (leaves.size() != expected) {
    throw std::invalid_argument("leaf count must be 2^(d*depth)");
  }
  DyadicMartingale m;
  m.d_ = d;
  m.depth_ = depth;
  m.source_ = Source::Explicit;
  m.values_.resize(depth + 1);
  m.values_[depth] = std::move(leaves);
  const double inv = std::pow(2.0, -d);
  for (int g = depth - 1; g >= 0; --g) {
    const std::size_t side = std::size_t{1} << g;
    const std::size_t child_side = side << 1;
    m.values_[g].assign(d == 1 ? side : side * side, 0.0);
    for (std::size_t p = 0; p < m.values_[g].size(); ++p) {
      const std::size_t p1 = d == 1 ? p : p % side;
      const std::size_t p2 = d == 1 ? 0 : p / side;
      double acc = 0.0;
      for (int code = 0; code < (1 << d); ++code) {
        const std::size_t c1 = 2 * p1 + (code & 1);
        const std::size_t c2 = 2 * p2 + ((code >> 1) & 1);
        acc += m.values_[g + 1][d == 1 ? c1 : c1 + child_side * c2];
      }
      m.values_[g][p] = acc * inv;
    }
  }
  return m;
}

DyadicMartingale DyadicMartingale::from_field(const field::ScalarField& f,
                                              const gauges::GaugeFunction& psi,
                                              int depth, int k0) {
  const int d = f.dimension();
  check_resolution(d, depth);
  DyadicMartingale m;
  m.d_ = d;
  m.depth_ = depth;
  m.source_ = Source::FieldInduced;
  m.values_.resize(depth + 1);
  m.tol_.resize(depth + 1);
  std::vector<std::vector<double>> quad_err(depth + 1);
  auto proxy_height = [&](double side) {
    return std::max(side * std::pow(2.0, -k0), f.min_height());
  };
  for (int g = 0; g <= depth; ++g) {
    const std::uint32_t side_count = 1u << g;
    const double side = std::pow(2.0, -g);
    const double y_star = proxy_height(side);
    const std::size_t count =
        d == 1 ? side_count : std::size_t(side_count) * side_count;
    m.values_[g].resize(count);
    m.tol_[g].assign(count, 0.0);
    quad_err[g].resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      const std::size_t i1 = d == 1 ? idx : idx % side_count;
      const std::size_t i2 = d == 1 ? 0 : idx / side_count;
      const Point corner{static_cast<double>(i1) * side,
                         static_cast<double>(i2) * side};
      const auto avg = field::transform_cube_average(f, d, corner, side, y_star);
      m.values_[g][idx] = avg.value;
      quad_err[g][idx] = avg.quad_error;
    }
  }
  // tol_mart at an internal node: the (main2) bound on moving the proxy
  // height from the child level to the parent level, plus quadrature slack
  for (int g = 0; g < depth; ++g) {
    const double side = std::pow(2.0, -g);
    const double y_parent = proxy_height(side);
    const double y_child = proxy_height(side / 2.0);
    const double drift =
        y_parent > y_child
            ? (2.0 * d / side) * psi.integral(y_child, y_parent)
            : 0.0;
    const std::uint32_t side_count = 1u << g;
    const std::size_t count =
        d == 1 ? side_count : std::size_t(side_count) * side_count;
    for (std::size_t idx = 0; idx < count; ++idx) {
      const std::size_t i1 = d == 1 ? idx : idx % side_count;
      const std::size_t i2 = d == 1 ? 0 : idx / side_count;
      double child_err = 0.0;
      const std::size_t child_side = std::size_t{1} << (g + 1);
      for (int code = 0; code < (1 << d); ++code) {
        const std::size_t c1 = 2 * i1 + (code & 1);
        const std::size_t c2 = 2 * i2 + ((code >> 1) & 1);
        child_err = std::max(
            child_err, quad_err[g + 1][d == 1 ? c1 : c1 + child_side * c2]);
      }
      m.tol_[g][idx] = drift + 10.0 * (quad_err[g][idx] + child_err + 1e-12);
    }
  }
  return m;
}

RandomSignedPath::RandomSignedPath(std::function<double(int)> scales,
                                   std::uint64_t seed, std::uint64_t path_id)
    : scales_(std::move(scales)),
      path_key_(rng::Stream(seed, 0x9A7 + path_id).key()),
      cube_state_(rng::Stream(seed, kTreeTag).key()) {}

void RandomSignedPath::step() {
  const int b = rng::Stream(path_key_).bit(static_cast<std::uint64_t>(n_));
  int signs[4];
  child_signs(1, rng::Stream(cube_state_), signs);
  const double s = scales_(n_ + 1);
  value_ += s * signs[b];
  qv_ += s * s;
  cube_state_ = rng::derive(cube_state_, static_cast<std::uint64_t>(b));
  if (n_ < 53) {
    x_ += b * bit_weight_;
    bit_weight_ *= 0.5;
  }
  ++n_;
}

bool RandomSignedPath::ratio_defined() const { return qv_ > kLilRegimeFloor; }

double RandomSignedPath::lil_ratio() const {
  return std::abs(value_) / lil_denominator_value(qv_);
}

FitCheck increment_bound_check(const DyadicMartingale& m,
                               const gauges::GaugeFunction& psi,
                               std::uint64_t seed) {
  rng::Stream calib(seed, 1), valid(seed, 2);
  FitCheck out;
  const int n = m.depth();
  auto scan = [&](const rng::Stream& src, int count, double* fitted) {
    double worst_ratio = 0.0;
    for (int i = 0; i < count; ++i) {
      Point x{src.uniform(2 * i), src.uniform(2 * i + 1)};
      double c_here = 0.0;
      for (int k = 1; k <= n; ++k) {
        c_here = std::max(c_here, std::abs(m.increment(x, k)) /
                                      psi(std::pow(2.0, -k)));
      }
      c_here = std::max(
          c_here, m.quadratic_variation(x, n) /
                      psi.square_function(std::pow(2.0, -n)));
      if (fitted) {
        *fitted = std::max(*fitted, c_here);
      } else {
        worst_ratio = std::max(worst_ratio, c_here);
      }
    }
    return worst_ratio;
  };
  scan(calib, 24, &out.fitted_constant);
  const double worst = scan(valid, 24, nullptr);
  out.worst_ratio = worst / std::max(out.fitted_constant, 1e-300);
  out.holds = worst <= 1.5 * out.fitted_constant + 1e-12;
  return out;
}

FitCheck closeness_check(const DyadicMartingale& m,
                         const field::ScalarField& f,
                         const gauges::GaugeFunction& psi,
                         std::uint64_t seed) {
  rng::Stream calib(seed, 3), valid(seed, 4);
  FitCheck out;
  const int depth = m.depth();
  auto deviation = [&](const Point& x, int n, double frac) {
    const double y = std::pow(2.0, -(n + 1)) * (1.0 + frac);
    if (y < f.min_height()) return 0.0;
    double integral = 0.0;
    if (!f.exactly_harmonic()) {
      integral = quad::integrate_or_throw(
          [&](double s) {
            const double h = std::exp(-s);
            return h * h * f.laplacian(x, h);
          },
          0.0, std::log(1.0 / y), {.rel_tol = 1e-9, .abs_tol = 1e-10});
    }
    return std::abs(f.value(x, y) - integral - m.value_at(x, n)) /
           psi(std::pow(2.0, -n));
  };
  auto scan = [&](const rng::Stream& src, int count, double* fitted) {
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
      Point x{src.uniform(3 * i), src.uniform(3 * i + 1)};
      const double frac = src.uniform(3 * i + 2);
      for (int n = 2; n <= depth; n += std::max(1, depth / 4)) {
        const double r = deviation(x, n, frac);
        if (fitted) {
          *fitted = std::max(*fitted, r);
        } else {
          worst = std::max(worst, r);
        }
      }
    }
    return worst;
  };
  scan(calib, 16, &out.fitted_constant);
  const double worst = scan(valid, 16, nullptr);
  out.worst_ratio = worst / std::max(out.fitted_constant, 1e-300);
  out.holds = worst <= 1.5 * out.fitted_constant + 1e-12;
  return out;
}

PathStats simulate_path(const std::function<double(int)>& scales,
                        std::uint64_t seed, std::uint64_t path_id, int n_max,
                        int window_lo) {
  RandomSignedPath path(scales, seed, path_id);
  PathStats st;
  for (int n = 1; n <= n_max; ++n) {
    path.step();
    if (n >= window_lo && path.ratio_defined()) {
      st.max_ratio_in_window = std::max(st.max_ratio_in_window, path.lil_ratio());
    }
  }
  st.x = path.x();
  st.terminal_value = path.value();
  st.terminal_qv = path.qv();
  if (path.ratio_defined()) {
    st.terminal_ratio = path.lil_ratio();
  } else {
    st.terminal_guarded = true;
  }
  return st;
}

}  // namespace lil::martingale
