#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace lil::cascade {

using Point = std::array<double, 2>;  // spatial coordinates; [1] unused for d=1

// A measure on R^d built by splitting mass down the dyadic tree: every unit
// cube carries mass 1 and each child receives a fixed fraction of its parent.
// The support keeps the unit cubes with integer corners in {-W..W}^d, which
// is the block of (2W+1)^d unit cubes centred on Q0 = [0,1)^d.
class CascadeMeasure {
 public:
  CascadeMeasure(int dimension, std::vector<double> weights, int depth,
                 int half_width = 8,
                 std::optional<std::uint64_t> permutation_seed = std::nullopt);

  int dimension() const { return d_; }
  int depth() const { return depth_; }
  int half_width() const { return half_width_; }
  const std::vector<double>& weights() const { return weights_; }
  bool equal_weights() const;

  // Number of unit cubes in the support; also the total mass.
  double total_mass() const;

  // Mass of the dyadic cube prod_j [k_j 2^{-n}, (k_j+1) 2^{-n}).
  // Throws std::domain_error outside the support or deeper than depth().
  double measure_of(int generation, std::array<std::int64_t, 2> corner) const;

  // Masses of all generation-n cells of one unit cube, in row-major order
  // of the local cell index.
  std::vector<double> unit_cube_masses(std::array<int, 2> base,
                                       int generation) const;

 private:
  double descend(std::array<int, 2> base, int generation,
                 std::array<std::int64_t, 2> local) const;

  int d_;
  std::vector<double> weights_;
  int depth_;
  int half_width_;
  std::optional<std::uint64_t> permutation_seed_;
};

struct ValGrad {
  double v = 0.0;
  std::array<double, 3> grad{};  // slots 0..1 spatial, slot 2 vertical
};

// A positive harmonic function on the upper half-space exposing value and
// gradient; the common currency of the square-function operations.
class HarmonicPositiveField {
 public:
  virtual ~HarmonicPositiveField() = default;
  virtual int dimension() const = 0;
  virtual double value(const Point& x, double y) const = 0;
  virtual std::array<double, 3> gradient(const Point& x, double y) const = 0;
  virtual ValGrad value_and_gradient(const Point& x, double y) const {
    return {value(x, y), gradient(x, y)};
  }
  virtual double min_height() const { return 0.0; }
};

// v = P[mu] for a cascade measure, with mu discretized at generation depth()
// as point masses at cell centres. Evaluation below 4 * 2^{-depth} is
// refused (resolution_error); the support truncation error is reported.
class PoissonExtension : public HarmonicPositiveField {
 public:
  explicit PoissonExtension(CascadeMeasure measure);

  int dimension() const override { return measure_.dimension(); }
  double min_height() const override { return y_floor_; }
  const CascadeMeasure& measure() const { return measure_; }
  std::size_t cell_count() const { return mass_.size(); }

  struct Eval {
    double v = 0.0;
    std::array<double, 3> grad{};   // spatial..., vertical
    double truncation_bound = 0.0;  // support-tail contribution to v
  };
  Eval eval(const Point& x, double y) const;

  struct Eval2 : Eval {
    // Hessian in (x1[, x2], y) coordinates, row-major upper triangle:
    // d=1: [xx, xy, yy];  d=2: [x1x1, x1x2, x1y, x2x2, x2y, yy]
    std::array<double, 6> hessian{};
  };
  Eval2 eval2(const Point& x, double y) const;

  double value(const Point& x, double y) const override {
    return eval(x, y).v;
  }
  std::array<double, 3> gradient(const Point& x, double y) const override {
    return eval(x, y).grad;
  }
  ValGrad value_and_gradient(const Point& x, double y) const override {
    auto e = eval(x, y);
    return {e.v, e.grad};
  }

 private:
  void check_height(double y) const;
  double tail_bound(const Point& x, double y) const;

  CascadeMeasure measure_;
  double y_floor_;
  // cell centres (SoA) and masses, unit cubes concatenated
  std::vector<double> cx_, cy_, mass_;
};

// Analytic override v(x, y) = y.
class HeightField : public HarmonicPositiveField {
 public:
  explicit HeightField(int dimension) : d_(dimension) {}
  int dimension() const override { return d_; }
  double value(const Point&, double y) const override { return y; }
  std::array<double, 3> gradient(const Point&, double) const override {
    return {0.0, 0.0, 1.0};
  }

 private:
  int d_;
};

// v = Poisson kernel of a single unit point mass.
class PointMassField : public HarmonicPositiveField {
 public:
  PointMassField(int dimension, Point location = {0.0, 0.0})
      : d_(dimension), loc_(location) {}
  int dimension() const override { return d_; }
  double value(const Point& x, double y) const override;
  std::array<double, 3> gradient(const Point& x, double y) const override;

 private:
  int d_;
  Point loc_;
};

// y |grad v| / v.
double harnack_ratio(const HarmonicPositiveField& f, const Point& x, double y);

// A^2(v)(x, y) = \int_y^1 t |grad v(x,t)|^2 / v^2(x,t) dt.
double a_squared_v(const HarmonicPositiveField& f, const Point& x, double y,
                   double rel_tol = 1e-6);

// A^2 at every ladder height (descending heights share integral segments).
std::vector<double> a_squared_ladder(const HarmonicPositiveField& f,
                                     const Point& x,
                                     const std::vector<double>& heights,
                                     double rel_tol = 1e-6);

// |log v + A^2(v)| / sqrt(log(1/y) log log log(1/y)); guarded.
double log_v_lil_ratio(const HarmonicPositiveField& f, const Point& x,
                       double y);

struct OscillationSample {
  double x;             // sample coordinate (d=1 experiments)
  double y;
  double window_ratio;  // exp(sup_{t in (y, C1 y)} |log v(x,t) - log v(x,y)|)
  double window_a2;     // \int_y^{C1 y} t |grad v|^2 / v^2 dt
  double a2;            // A^2(v)(x, y)
  double a2_over_log;   // A^2 / log(1/y)
};

struct LowerBoundReport {
  double c1 = 0.0;                 // chosen from {2, 4, 8}
  double c2 = 0.0;                 // inf over samples of window_ratio
  bool window_bound_holds = true;  // window_a2 >= log^2(ratio)/log(C1) - tol
  double inf_ratio = 0.0;          // inf A^2 / log(1/y)
  std::vector<double> per_height_inf;
  std::vector<OscillationSample> samples;
};

// Empirical run of the oscillation argument behind the A^2 lower bound.
// Requires unequal weights; samples x uniformly in Q0.
LowerBoundReport cascade_lower_bound_check(const PoissonExtension& p,
                                           const std::vector<double>& heights,
                                           int n_samples, std::uint64_t seed);

}  // namespace lil::cascade
