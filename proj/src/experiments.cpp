#include "lil/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "lil/common.hpp"
#include "lil/csv.hpp"
#include "lil/martingale.hpp"
#include "lil/parallel.hpp"
#include "lil/rng.hpp"
#include "lil/verify.hpp"

namespace lil::experiments {
namespace {

using config::config_error;
using config::json;

int resolve_threads(const config::RunConfig& cfg) {
  return cfg.threads > 0 ? cfg.threads : par::default_threads();
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

json column_schema(const std::vector<std::string>& columns,
                   const std::string& note) {
  json schema;
  schema["columns"] = columns;
  schema["note"] = note;
  return schema;
}

// ---------------------------------------------------------- martingale-lil --

RunResult run_martingale_lil(const config::RunConfig& cfg) {
  const json& p = cfg.payload;
  const int d = p.contains("d") ? p["d"].get<int>() : 1;
  if (d != 1) throw config_error("/d", "path experiments support d = 1");
  const int depth = p.contains("depth") ? p["depth"].get<int>() : 14;
  if (depth < 5 || depth > 24) throw config_error("/depth", "need 5 <= depth <= 24");
  const int paths = p.contains("paths") ? p["paths"].get<int>() : 2000;
  if (paths < 1 || paths > 100000) throw config_error("/paths", "out of range");
  auto scales = p.contains("scales")
                    ? config::scales_from_json(p["scales"], "/scales")
                    : std::function<double(int)>([](int) { return 1.0; });

  const int n_max = 1 << depth;
  const int window_lo = std::min(n_max, 1 << 10);
  struct Row {
    std::vector<std::array<double, 4>> checkpoints;  // n, T_n, qv, ratio
    std::vector<bool> guarded;
    martingale::PathStats stats;
  };
  std::vector<Row> rows(paths);
  par::parallel_for(paths, resolve_threads(cfg), [&](std::size_t pid) {
    martingale::RandomSignedPath path(scales, cfg.seed, pid);
    Row& row = rows[pid];
    double window_max = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      path.step();
      if (n >= window_lo && path.ratio_defined()) {
        window_max = std::max(window_max, path.lil_ratio());
      }
      if ((n & (n - 1)) == 0 && n >= 16) {  // checkpoint at powers of two
        const bool guarded = !path.ratio_defined();
        row.checkpoints.push_back({static_cast<double>(n), path.value(),
                                   path.qv(),
                                   guarded ? 0.0 : path.lil_ratio()});
        row.guarded.push_back(guarded);
      }
    }
    row.stats.x = path.x();
    row.stats.terminal_value = path.value();
    row.stats.terminal_qv = path.qv();
    row.stats.max_ratio_in_window = window_max;
    if (path.ratio_defined()) {
      row.stats.terminal_ratio = path.lil_ratio();
    } else {
      row.stats.terminal_guarded = true;
    }
  });

  csv::Writer w;
  w.row({"seed", "x", "n", "T_n", "QV_n", "ratio"});
  std::vector<double> terminal;
  int exceed = 0;
  double max_ratio = 0.0;
  for (int pid = 0; pid < paths; ++pid) {
    const Row& row = rows[pid];
    for (std::size_t c = 0; c < row.checkpoints.size(); ++c) {
      const auto& cp = row.checkpoints[c];
      csv::RowBuilder rb;
      rb.integer(static_cast<long long>(cfg.seed))
          .num(row.stats.x)
          .integer(static_cast<long long>(cp[0]))
          .num(cp[1])
          .num(cp[2]);
      if (row.guarded[c]) {
        rb.blank();
      } else {
        rb.num(cp[3]);
      }
      w.row(rb.fields());
    }
    if (!row.stats.terminal_guarded) terminal.push_back(row.stats.terminal_ratio);
    if (row.stats.max_ratio_in_window > 3.0) ++exceed;
    max_ratio = std::max(max_ratio, row.stats.max_ratio_in_window);
  }

  RunResult out;
  out.csv = w.str();
  out.csv_filename = "martingale-lil.csv";
  out.summary["experiment"] = "martingale-lil";
  out.summary["paths"] = paths;
  out.summary["n_max"] = n_max;
  out.summary["median_terminal_ratio"] = median_of(terminal);
  out.summary["max_running_ratio"] = max_ratio;
  out.summary["exceedance_window"] = {window_lo, n_max};
  out.summary["paths_above_3"] = exceed;
  out.summary["exceedance_fraction"] =
      static_cast<double>(exceed) / static_cast<double>(paths);
  out.summary["schema"] = column_schema(
      {"seed", "x", "n", "T_n", "QV_n", "ratio"},
      "one row per path per power-of-two checkpoint; ratio empty while the "
      "quadratic variation is below the LIL regime floor");
  return out;
}

// -------------------------------------------------------------- field-lil --

RunResult run_field_lil(const config::RunConfig& cfg) {
  const json& p = cfg.payload;
  if (!p.contains("field")) throw config_error("/field", "missing required key");
  if (!p.contains("psi")) throw config_error("/psi", "missing required key");
  const auto f = config::field_from_json(p["field"], "/field");
  const auto psi = config::gauge_from_json(p["psi"], "/psi");
  std::vector<double> heights =
      p.contains("heights")
          ? p["heights"].get<std::vector<double>>()
          : std::vector<double>{};
  if (heights.empty()) {
    for (int k = 4; k <= 12; ++k) heights.push_back(std::pow(2.0, -k));
  }
  std::vector<double> points;
  if (p.contains("points")) {
    points = p["points"].get<std::vector<double>>();
  } else {
    rng::Stream st(cfg.seed, 0xF1E1D);
    for (int i = 0; i < 16; ++i) points.push_back(st.uniform(i));
  }

  struct Row {
    double x, y, numerator, denominator, ratio, correction;
    bool guarded;
  };
  std::vector<Row> rows(points.size() * heights.size());
  const bool has_eps = p.contains("eps");
  const auto eps = has_eps ? config::gauge_from_json(p["eps"], "/eps") : psi;
  par::parallel_for(points.size(), resolve_threads(cfg), [&](std::size_t i) {
    for (std::size_t h = 0; h < heights.size(); ++h) {
      Row& row = rows[i * heights.size() + h];
      row.x = points[i];
      row.y = heights[h];
      row.guarded = false;
      row.correction = has_eps ? field::corrected_numerator(eps, row.y) : 0.0;
      try {
        row.numerator = field::lil_numerator(f, {row.x, 0.0}, row.y);
        row.denominator = psi.lil_denominator(row.y);
        row.ratio = row.numerator / row.denominator;
      } catch (const guard_error&) {
        row.guarded = true;
        row.numerator = row.denominator = row.ratio = 0.0;
      } catch (const resolution_error&) {
        row.guarded = true;
        row.numerator = row.denominator = row.ratio = 0.0;
      }
    }
  });

  csv::Writer w;
  w.row({"x", "y", "numerator", "denominator", "ratio", "eps_correction"});
  double sup_ratio = 0.0;
  int guarded = 0;
  for (const Row& row : rows) {
    csv::RowBuilder rb;
    rb.num(row.x).num(row.y);
    if (row.guarded) {
      rb.blank().blank().blank();
      ++guarded;
    } else {
      rb.num(row.numerator).num(row.denominator).num(row.ratio);
      sup_ratio = std::max(sup_ratio, row.ratio);
    }
    rb.num(row.correction);
    w.row(rb.fields());
  }

  RunResult out;
  out.csv = w.str();
  out.csv_filename = "field-lil.csv";
  out.summary["experiment"] = "field-lil";
  out.summary["field"] = f.name();
  out.summary["sup_ratio"] = sup_ratio;
  out.summary["guarded_rows"] = guarded;
  out.summary["schema"] = column_schema(
      {"x", "y", "numerator", "denominator", "ratio", "eps_correction"},
      "numerator/denominator/ratio empty where the LIL regime guard trips");
  return out;
}

// ---------------------------------------------------------------- cascade --

RunResult run_cascade(const config::RunConfig& cfg) {
  const json& p = cfg.payload;
  if (!p.contains("cascade")) {
    throw config_error("/cascade", "missing required key");
  }
  auto measure = config::cascade_from_json(p["cascade"], "/cascade");
  const cascade::PoissonExtension ext(std::move(measure));
  std::vector<double> heights =
      p.contains("heights") ? p["heights"].get<std::vector<double>>()
                            : std::vector<double>{};
  if (heights.empty()) {
    for (int k = 6; k <= 11; ++k) heights.push_back(std::pow(2.0, -k));
  }
  std::sort(heights.begin(), heights.end(), std::greater<>());
  const int samples = p.contains("samples") ? p["samples"].get<int>() : 200;
  if (samples < 1 || samples > 100000) throw config_error("/samples", "out of range");
  const int probes =
      p.contains("harnack_probes") ? p["harnack_probes"].get<int>() : 2000;

  struct Row {
    double x, y, v, grad_norm, harnack, a2, ratio;
    bool guarded;
  };
  std::vector<Row> rows(samples * heights.size());
  rng::Stream xs(cfg.seed, 0xCA5CADE);
  std::vector<double> xvals(samples);
  for (int i = 0; i < samples; ++i) xvals[i] = xs.uniform(i);
  const int threads = resolve_threads(cfg);
  par::parallel_for(samples, threads, [&](std::size_t i) {
    const cascade::Point x{xvals[i], 0.0};
    const auto a2 = cascade::a_squared_ladder(ext, x, heights);
    for (std::size_t h = 0; h < heights.size(); ++h) {
      Row& row = rows[i * heights.size() + h];
      row.x = xvals[i];
      row.y = heights[h];
      auto e = ext.eval(x, row.y);
      row.v = e.v;
      row.grad_norm = std::sqrt(e.grad[0] * e.grad[0] + e.grad[1] * e.grad[1] +
                                e.grad[2] * e.grad[2]);
      row.harnack = row.y * row.grad_norm / row.v;
      row.a2 = a2[h];
      row.guarded = false;
      const double big_l = std::log(1.0 / row.y);
      if (big_l > kLilRegimeFloor) {
        row.ratio = std::abs(std::log(row.v) + row.a2) /
                    lil_denominator_value(big_l);
      } else {
        row.guarded = true;
        row.ratio = 0.0;
      }
    }
  });

  // Harnack sup over log-uniform probes above the resolution floor
  std::vector<double> harnack(probes, 0.0);
  par::parallel_for(probes, threads, [&](std::size_t i) {
    rng::Stream st(cfg.seed, 0x4A21 + i);
    const cascade::Point x{st.uniform(0), 0.0};
    const double y =
        ext.min_height() * std::pow(0.5 / ext.min_height(), st.uniform(1));
    harnack[i] = cascade::harnack_ratio(ext, x, y);
  });
  const double harnack_sup = *std::max_element(harnack.begin(), harnack.end());

  csv::Writer w;
  w.row({"x", "y", "v", "grad_norm", "harnack", "a2", "lil_ratio"});
  double inf_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> per_height_inf(heights.size(),
                                     std::numeric_limits<double>::infinity());
  std::vector<double> ratios;
  for (int i = 0; i < samples; ++i) {
    for (std::size_t h = 0; h < heights.size(); ++h) {
      const Row& row = rows[i * heights.size() + h];
      csv::RowBuilder rb;
      rb.num(row.x).num(row.y).num(row.v).num(row.grad_norm).num(row.harnack)
          .num(row.a2);
      if (row.guarded) {
        rb.blank();
      } else {
        rb.num(row.ratio);
        ratios.push_back(row.ratio);
      }
      w.row(rb.fields());
      const double over_log = row.a2 / std::log(1.0 / row.y);
      inf_ratio = std::min(inf_ratio, over_log);
      per_height_inf[h] = std::min(per_height_inf[h], over_log);
    }
  }

  RunResult out;
  out.csv = w.str();
  out.csv_filename = "cascade.csv";
  out.summary["experiment"] = "cascade";
  out.summary["samples"] = samples;
  out.summary["inf_a2_over_log"] = inf_ratio;
  out.summary["per_height_inf"] = per_height_inf;
  out.summary["harnack_sup"] = harnack_sup;
  out.summary["harnack_probes"] = probes;
  out.summary["median_lil_ratio"] = median_of(ratios);
  out.summary["resolution_floor"] = ext.min_height();
  out.summary["schema"] = column_schema(
      {"x", "y", "v", "grad_norm", "harnack", "a2", "lil_ratio"},
      "lil_ratio empty where log(1/y) is below the regime floor");
  return out;
}

// ------------------------------------------------------------------- disc --

RunResult run_disc(const config::RunConfig& cfg) {
  const json& p = cfg.payload;
  if (!p.contains("discmap")) throw config_error("/discmap", "missing required key");
  const auto f = config::discmap_from_json(p["discmap"], "/discmap");
  std::vector<double> radii =
      p.contains("radii") ? p["radii"].get<std::vector<double>>()
                          : std::vector<double>{};
  if (radii.empty()) {
    for (int k = 4; k <= 12; k += 2) radii.push_back(1.0 - std::pow(2.0, -k));
  }
  const int directions =
      p.contains("directions") ? p["directions"].get<int>() : 64;
  if (directions < 1 || directions > 65536) {
    throw config_error("/directions", "out of range");
  }
  const int probes = p.contains("probes") ? p["probes"].get<int>() : 2000;

  struct Row {
    double theta, r, dh, a2, ratio;
    bool guarded, saturated;
  };
  std::vector<Row> rows(directions * radii.size());
  par::parallel_for(directions, resolve_threads(cfg), [&](std::size_t j) {
    const double theta = 2.0 * std::numbers::pi * j / directions;
    const std::complex<double> xi{std::cos(theta), std::sin(theta)};
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      Row& row = rows[j * radii.size() + ri];
      row.theta = theta;
      row.r = radii[ri];
      row.guarded = row.saturated = false;
      try {
        row.dh = disc::hyperbolic_distance(f.value(row.r * xi), 0.0);
        row.a2 = disc::a_squared(f, xi, row.r);
        const double big_l = std::log(1.0 / (1.0 - row.r));
        if (big_l > kLilRegimeFloor) {
          row.ratio = std::abs(row.dh - row.a2) / lil_denominator_value(big_l);
        } else {
          row.guarded = true;
          row.ratio = 0.0;
        }
      } catch (const saturation_error&) {
        row.saturated = true;
        row.dh = row.a2 = row.ratio = 0.0;
      }
    }
  });

  // Schwarz-Pick sup over random probes
  std::vector<double> sp(probes, 0.0);
  par::parallel_for(probes, resolve_threads(cfg), [&](std::size_t i) {
    rng::Stream st(cfg.seed, 0xD15C + i);
    const double r = 0.97 * std::sqrt(st.uniform(0));
    const double th = 2.0 * std::numbers::pi * st.uniform(1);
    sp[i] = disc::hyperbolic_derivative(
        f, {r * std::cos(th), r * std::sin(th)});
  });
  const double sp_sup = *std::max_element(sp.begin(), sp.end());

  csv::Writer w;
  w.row({"xi_angle", "r", "d_h", "a2", "ratio"});
  double inf_a2_over_log = std::numeric_limits<double>::infinity();
  std::vector<double> ratios;
  for (const Row& row : rows) {
    csv::RowBuilder rb;
    rb.num(row.theta).num(row.r);
    if (row.saturated) {
      rb.blank().blank().blank();
    } else {
      rb.num(row.dh).num(row.a2);
      if (row.guarded) {
        rb.blank();
      } else {
        rb.num(row.ratio);
        ratios.push_back(row.ratio);
      }
      inf_a2_over_log =
          std::min(inf_a2_over_log, row.a2 / std::log(1.0 / (1.0 - row.r)));
    }
    w.row(rb.fields());
  }

  RunResult out;
  out.csv = w.str();
  out.csv_filename = "disc.csv";
  out.summary["experiment"] = "disc";
  out.summary["map"] = f.kind();
  out.summary["schwarz_pick_sup"] = sp_sup;
  out.summary["inf_a2_over_log"] = inf_a2_over_log;
  out.summary["median_ratio"] = median_of(ratios);
  out.summary["schema"] = column_schema(
      {"xi_angle", "r", "d_h", "a2", "ratio"},
      "ratio empty below the regime floor; all numeric fields empty on "
      "saturation");
  return out;
}

// -------------------------------------------------------------- threshold --

RunResult run_threshold(const config::RunConfig& cfg) {
  const json& p = cfg.payload;
  const bool has_seq = p.contains("sequence");
  const bool has_gauge = p.contains("gauge");
  if (has_seq == has_gauge) {
    throw config_error("", "need exactly one of sequence/gauge");
  }
  RunResult out;
  out.summary["experiment"] = "threshold";
  csv::Writer w;
  if (has_seq) {
    const auto seq = config::sequence_from_json(p["sequence"], "/sequence");
    const int n = p.contains("n") ? p["n"].get<int>()
                                  : std::min(1 << 16, seq.max_index());
    const auto rep = threshold::check_conditions(seq, n);
    w.row({"n", "improvement_ratio", "monotone", "log_concave",
           "threshold_consistent"});
    for (int k = 4; (1 << k) <= n; ++k) {
      csv::RowBuilder rb;
      rb.integer(1 << k);
      try {
        const double ratio = threshold::improvement_ratio(seq, 1 << k);
        if (std::isfinite(ratio)) {
          rb.num(ratio);
        } else {
          rb.blank();  // partial sums overflowed
        }
      } catch (const guard_error&) {
        rb.blank();
      }
      rb.integer(rep.monotone).integer(rep.log_concave)
          .integer(rep.threshold_consistent);
      w.row(rb.fields());
    }
    out.summary["sequence"] = seq.name();
    out.summary["smallest_C"] = rep.smallest_c;
    out.summary["monotone"] = rep.monotone;
    out.summary["log_concave"] = rep.log_concave;
    out.summary["tail_slope"] = rep.tail_slope;
    out.summary["threshold_failed"] = !rep.threshold_consistent;
    out.summary["schema"] = column_schema(
        {"n", "improvement_ratio", "monotone", "log_concave",
         "threshold_consistent"},
        "improvement_ratio empty while sum a_k^2 is below the regime floor");
  } else {
    const auto g = config::gauge_from_json(p["gauge"], "/gauge");
    std::vector<double> ladder =
        p.contains("heights") ? p["heights"].get<std::vector<double>>()
                              : std::vector<double>{};
    const auto rep = threshold::continuous_threshold_check(g, ladder);
    w.row({"log_inv_y", "ratio", "threshold_quantity"});
    for (const auto& pt : rep.points) {
      csv::RowBuilder rb;
      rb.num(pt.log_inv_y);
      if (pt.guarded) {
        rb.blank();
      } else {
        rb.num(pt.ratio);
      }
      rb.num(pt.threshold_quantity);
      w.row(rb.fields());
    }
    out.summary["gauge"] = g.name();
    out.summary["diagnose_ok"] = rep.diagnose_ok;
    out.summary["concavity_ok"] = rep.concavity_ok;
    out.summary["threshold_failed"] = !rep.ratio_decreasing;
    out.summary["schema"] = column_schema(
        {"log_inv_y", "ratio", "threshold_quantity"},
        "ratio empty while Psi is below the regime floor");
  }
  out.csv = w.str();
  out.csv_filename = "threshold.csv";
  return out;
}

// ----------------------------------------------------------------- verify --

RunResult run_verify(const config::RunConfig& cfg) {
  const json& p = cfg.payload;
  std::vector<verify::CheckResult> results;
  if (p.contains("module")) {
    results = verify::run_module(p["module"].get<std::string>(), cfg.seed,
                                 resolve_threads(cfg));
  } else {
    results = verify::run_all(cfg.seed, resolve_threads(cfg));
  }
  csv::Writer w;
  w.row({"module", "check", "passed", "detail"});
  int failures = 0;
  for (const auto& r : results) {
    csv::RowBuilder rb;
    rb.text(r.module).text(r.name).integer(r.passed ? 1 : 0).text(r.detail);
    w.row(rb.fields());
    if (!r.passed) ++failures;
  }
  RunResult out;
  out.csv = w.str();
  out.csv_filename = "verify.csv";
  out.summary["experiment"] = "verify";
  out.summary["checks"] = static_cast<int>(results.size());
  out.summary["failures"] = failures;
  out.summary["schema"] =
      column_schema({"module", "check", "passed", "detail"}, "");
  out.exit_code = failures == 0 ? 0 : 1;
  return out;
}

}  // namespace

RunResult run(const config::RunConfig& cfg) {
  RunResult out;
  if (cfg.experiment == "martingale-lil") {
    out = run_martingale_lil(cfg);
  } else if (cfg.experiment == "field-lil") {
    out = run_field_lil(cfg);
  } else if (cfg.experiment == "cascade") {
    out = run_cascade(cfg);
  } else if (cfg.experiment == "disc") {
    out = run_disc(cfg);
  } else if (cfg.experiment == "threshold") {
    out = run_threshold(cfg);
  } else if (cfg.experiment == "verify") {
    out = run_verify(cfg);
  } else {
    throw config_error("/experiment", "unknown experiment " + cfg.experiment);
  }
  out.summary["seed"] = cfg.seed;
  out.summary["threads"] = resolve_threads(cfg);
  return out;
}

void write_outputs(const config::RunConfig& cfg, const RunResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  std::ofstream csv_out(fs::path(cfg.out_dir) / result.csv_filename,
                        std::ios::binary);
  csv_out << result.csv;
  std::ofstream summary_out(fs::path(cfg.out_dir) / "summary.json");
  summary_out << result.summary.dump(2) << "\n";
}

}  // namespace lil::experiments
