#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "lil/field.hpp"
#include "lil/gauges.hpp"

namespace lil::martingale {

using Point = field::Point;

// Dyadic cube of Q0 = [0,1)^d: prod_j [(k_j - 1) 2^{-n}, k_j 2^{-n}),
// k_j in {1..2^n}.
struct DyadicCube {
  int d = 1;
  int generation = 0;
  std::array<std::uint32_t, 2> index{1, 1};  // 1-based

  double side() const;
  Point corner() const;
  bool contains(const Point& x) const;
};

// The unique tower Q0 in Q1 in ... containing x; throws outside Q0.
std::vector<DyadicCube> tower(int d, const Point& x, int n);

enum class Source { FieldInduced, RandomSigned, Explicit };

// Values T_n(Q) on all dyadic cubes up to a depth, with the mean property
// T_{n-1}(Q) = 2^{-d} sum T_n(Q^j) exact for RandomSigned/Explicit sources
// and certified within node_tolerance for field-induced ones.
class DyadicMartingale {
 public:
  // T_n(Q) = avg_Q T(., l(Q) 2^{-k0}), the truncation of the y -> 0 limit;
  // every node carries the (main2)-certified tolerance of that truncation.
  static DyadicMartingale from_field(const field::ScalarField& f,
                                     const gauges::GaugeFunction& psi,
                                     int depth, int k0 = 10);
  // T_0 = 0; children get the parent value +/- s_k with zero-sum sign
  // vectors drawn per cube from counter-based streams (scales are 1-based).
  static DyadicMartingale random_signed(int d, int depth,
                                        std::function<double(int)> scales,
                                        std::uint64_t seed);
  static DyadicMartingale from_leaves(int d, int depth,
                                      std::vector<double> leaf_values);

  int dimension() const { return d_; }
  int depth() const { return depth_; }
  Source source() const { return source_; }

  double value(const DyadicCube& q) const;
  double value_at(const Point& x, int n) const;
  double increment(const Point& x, int k) const;  // X_k(x)
  // <T>_n(x) = sum_k 2^{-d} sum_j (T_k(Q_k^j) - T_{k-1}(x))^2
  double quadratic_variation(const Point& x, int n) const;
  // |T_n| / sqrt(<T>_n log log <T>_n); guard_error below the regime
  double lil_ratio(const Point& x, int n) const;

  double mean_defect(const DyadicCube& q) const;     // internal nodes
  double node_tolerance(const DyadicCube& q) const;  // tol_mart; 0 if exact
  double max_mean_defect_excess() const;  // max over nodes of defect - tol

 private:
  DyadicMartingale() = default;
  std::size_t flat(const DyadicCube& q) const;

  int d_ = 1;
  int depth_ = 0;
  Source source_ = Source::Explicit;
  std::vector<std::vector<double>> values_;  // per generation, row-major
  std::vector<std::vector<double>> tol_;     // per generation, FieldInduced
};

// Lazy d = 1 path of a RandomSigned martingale: identical values to the
// tree (same per-cube streams) but no storage, so generations far beyond
// the tree cap are reachable. The boundary point is built bit by bit.
class RandomSignedPath {
 public:
  RandomSignedPath(std::function<double(int)> scales, std::uint64_t seed,
                   std::uint64_t path_id);

  void step();
  int generation() const { return n_; }
  double value() const { return value_; }
  double qv() const { return qv_; }
  double x() const { return x_; }
  bool ratio_defined() const;
  double lil_ratio() const;  // guard_error when below the regime

 private:
  std::function<double(int)> scales_;
  std::uint64_t path_key_;
  std::uint64_t cube_state_;
  int n_ = 0;
  double value_ = 0.0;
  double qv_ = 0.0;
  double x_ = 0.0;
  double bit_weight_ = 0.5;
};

struct FitCheck {
  double fitted_constant = 0.0;  // C on the calibration set
  bool holds = false;            // validation within 1.5x the fitted C
  double worst_ratio = 0.0;      // worst validation ratio / C
};

// (matprop2)/(matprop3): |X_k| <= C psi(2^{-k}) and <T>_n <= C Psi(2^{-n}),
// with C fitted on calibration points and validated on fresh ones.
FitCheck increment_bound_check(const DyadicMartingale& m,
                               const gauges::GaugeFunction& psi,
                               std::uint64_t seed = 7);

// (matprop1): |u(x,y) - int_y^1 t Lap u dt - T_n(x)| <= C psi(2^{-n}) for
// 2^{-(n+1)} <= y <= 2^{-n}.
FitCheck closeness_check(const DyadicMartingale& m,
                         const field::ScalarField& f,
                         const gauges::GaugeFunction& psi,
                         std::uint64_t seed = 7);

struct PathStats {
  double x = 0.0;
  double terminal_value = 0.0;
  double terminal_qv = 0.0;
  double terminal_ratio = 0.0;
  double max_ratio_in_window = 0.0;  // over n in [window_lo, n_max], guarded
  bool terminal_guarded = false;     // ratio undefined at n_max
};

// Runs one path to n_max, tracking the running ratio on [window_lo, n_max].
PathStats simulate_path(const std::function<double(int)>& scales,
                        std::uint64_t seed, std::uint64_t path_id, int n_max,
                        int window_lo);

}  // namespace lil::martingale
