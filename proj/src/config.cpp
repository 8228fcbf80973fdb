#include "lil/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace lil::config {
namespace {

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& required,
                const std::set<std::string>& optional) {
  if (!j.is_object()) throw config_error(path, "expected an object");
  for (const auto& item : j.items()) {
    if (!required.count(item.key()) && !optional.count(item.key())) {
      throw config_error(path + "/" + item.key(), "unknown key");
    }
  }
  for (const auto& key : required) {
    if (!j.contains(key)) {
      throw config_error(path + "/" + key, "missing required key");
    }
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw config_error(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw config_error(path, "expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw config_error(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_number_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw config_error(path, "expected a non-empty array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], path + "/" + std::to_string(i)));
  }
  return out;
}

std::complex<double> get_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw config_error(path, "expected [re, im]");
  }
  return {get_number(j[0], path + "/0"), get_number(j[1], path + "/1")};
}

const std::set<std::string> kExperiments = {
    "martingale-lil", "field-lil", "cascade", "disc", "threshold", "verify"};

const std::set<std::string> kCommonKeys = {"experiment", "seed", "threads",
                                           "out"};

std::set<std::string> experiment_keys(const std::string& experiment) {
  if (experiment == "martingale-lil") {
    return {"d", "scales", "depth", "paths"};
  }
  if (experiment == "field-lil") {
    return {"field", "psi", "eps", "heights", "points"};
  }
  if (experiment == "cascade") {
    return {"cascade", "heights", "samples", "harnack_probes"};
  }
  if (experiment == "disc") {
    return {"discmap", "radii", "directions", "probes"};
  }
  if (experiment == "threshold") {
    return {"sequence", "gauge", "n", "heights"};
  }
  return {"module"};  // verify
}

}  // namespace

RunConfig parse(const json& root) {
  if (!root.is_object()) throw config_error("", "top level must be an object");
  if (!root.contains("experiment")) {
    throw config_error("/experiment", "missing required key");
  }
  RunConfig cfg;
  cfg.experiment = get_string(root["experiment"], "/experiment");
  if (!kExperiments.count(cfg.experiment)) {
    throw config_error("/experiment", "unknown experiment " + cfg.experiment);
  }
  auto allowed = experiment_keys(cfg.experiment);
  std::set<std::string> optional = kCommonKeys;
  optional.insert(allowed.begin(), allowed.end());
  check_keys(root, "", {"experiment"}, optional);
  if (root.contains("seed")) {
    if (!root["seed"].is_number_integer()) {
      throw config_error("/seed", "expected a 64-bit integer");
    }
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("threads")) {
    cfg.threads = get_int(root["threads"], "/threads");
    if (cfg.threads < 1) throw config_error("/threads", "must be >= 1");
  }
  if (root.contains("out")) cfg.out_dir = get_string(root["out"], "/out");
  cfg.payload = root;
  for (const auto& key : kCommonKeys) cfg.payload.erase(key);
  return cfg;
}

RunConfig parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("", "cannot open config file " + path);
  json root = json::parse(in);  // throws json::parse_error with byte offsets
  return parse(root);
}

gauges::GaugeFunction gauge_from_json(const json& j, const std::string& path) {
  check_keys(j, path, {"kind"},
             {"B", "alpha", "shift", "delta", "knots", "value"});
  const std::string kind = get_string(j["kind"], path + "/kind");
  try {
    if (kind == "constant") {
      return gauges::GaugeFunction::constant(
          get_number(j.at("B"), path + "/B"));
    }
    if (kind == "shifted-log-power") {
      const double shift =
          j.contains("shift") ? get_number(j["shift"], path + "/shift") : 1.0;
      return gauges::GaugeFunction::shifted_log_power(
          get_number(j.at("alpha"), path + "/alpha"), shift);
    }
    if (kind == "power-law") {
      return gauges::GaugeFunction::power_law(
          get_number(j.at("delta"), path + "/delta"));
    }
    if (kind == "tabulated") {
      if (!j.contains("knots") || !j["knots"].is_array()) {
        throw config_error(path + "/knots", "expected an array of [y, value]");
      }
      std::vector<std::pair<double, double>> knots;
      for (std::size_t i = 0; i < j["knots"].size(); ++i) {
        const auto c = get_complex(j["knots"][i],
                                   path + "/knots/" + std::to_string(i));
        knots.emplace_back(c.real(), c.imag());
      }
      return gauges::GaugeFunction::tabulated(std::move(knots));
    }
  } catch (const json::out_of_range&) {
    throw config_error(path, "missing parameter for gauge kind " + kind);
  } catch (const std::invalid_argument& e) {
    throw config_error(path, e.what());
  }
  throw config_error(path + "/kind", "unknown gauge kind " + kind);
}

cascade::CascadeMeasure cascade_from_json(const json& j,
                                          const std::string& path) {
  check_keys(j, path, {"weights", "depth"},
             {"half_width", "seed", "d"});
  auto weights = get_number_list(j["weights"], path + "/weights");
  const int depth = get_int(j["depth"], path + "/depth");
  const int w = j.contains("half_width")
                    ? get_int(j["half_width"], path + "/half_width")
                    : 8;
  int d = weights.size() == 2 ? 1 : 2;
  if (j.contains("d")) d = get_int(j["d"], path + "/d");
  std::optional<std::uint64_t> perm;
  if (j.contains("seed")) {
    perm = static_cast<std::uint64_t>(get_int(j["seed"], path + "/seed"));
  }
  try {
    return cascade::CascadeMeasure(d, std::move(weights), depth, w, perm);
  } catch (const std::invalid_argument& e) {
    throw config_error(path, e.what());
  }
}

disc::DiscMap discmap_from_json(const json& j, const std::string& path) {
  check_keys(j, path, {"kind"},
             {"zeros", "eta", "power", "c", "degree", "seed", "outer",
              "inner"});
  const std::string kind = get_string(j["kind"], path + "/kind");
  try {
    if (kind == "identity") return disc::DiscMap::identity();
    if (kind == "monomial") {
      return disc::DiscMap::monomial(get_int(j.at("power"), path + "/power"));
    }
    if (kind == "constant") {
      return disc::DiscMap::constant(get_complex(j.at("c"), path + "/c"));
    }
    if (kind == "blaschke") {
      if (!j.contains("zeros") || !j["zeros"].is_array()) {
        throw config_error(path + "/zeros", "expected an array of [re, im]");
      }
      std::vector<std::complex<double>> zeros;
      for (std::size_t i = 0; i < j["zeros"].size(); ++i) {
        zeros.push_back(get_complex(j["zeros"][i],
                                    path + "/zeros/" + std::to_string(i)));
      }
      std::complex<double> eta{1.0, 0.0};
      if (j.contains("eta")) eta = get_complex(j["eta"], path + "/eta");
      return disc::DiscMap::blaschke(std::move(zeros), eta);
    }
    if (kind == "random-blaschke") {
      return disc::random_blaschke(
          get_int(j.at("degree"), path + "/degree"),
          static_cast<std::uint64_t>(get_int(j.at("seed"), path + "/seed")));
    }
    if (kind == "compose") {
      return disc::DiscMap::compose(
          discmap_from_json(j.at("outer"), path + "/outer"),
          discmap_from_json(j.at("inner"), path + "/inner"));
    }
  } catch (const json::out_of_range&) {
    throw config_error(path, "missing parameter for disc map kind " + kind);
  } catch (const std::invalid_argument& e) {
    throw config_error(path, e.what());
  }
  throw config_error(path + "/kind", "unknown disc map kind " + kind);
}

field::ScalarField field_from_json(const json& j, const std::string& path) {
  check_keys(j, path, {"kind"},
             {"d", "alpha", "shift", "coefficients", "cascade", "discmap",
              "fd_step_scale"});
  const std::string kind = get_string(j["kind"], path + "/kind");
  const int d = j.contains("d") ? get_int(j["d"], path + "/d") : 1;
  field::ScalarField out = [&]() -> field::ScalarField {
    try {
      if (kind == "vertical-log") return field::ScalarField::vertical_log(d);
      if (kind == "vertical-log-power") {
        const double shift = j.contains("shift")
                                 ? get_number(j["shift"], path + "/shift")
                                 : 1.0;
        return field::ScalarField::vertical_log_power(
            d, get_number(j.at("alpha"), path + "/alpha"), shift);
      }
      if (kind == "harmonic-linear") {
        return field::ScalarField::harmonic_linear(d);
      }
      if (kind == "harmonic-height") {
        return field::ScalarField::harmonic_height(d);
      }
      if (kind == "lacunary-harmonic") {
        return field::ScalarField::lacunary_harmonic(get_number_list(
            j.at("coefficients"), path + "/coefficients"));
      }
      if (kind == "poisson-log") {
        auto measure = cascade_from_json(j.at("cascade"), path + "/cascade");
        return field::ScalarField::poisson_log(
            std::make_shared<const cascade::PoissonExtension>(
                std::move(measure)));
      }
      if (kind == "disc-pull") {
        return field::ScalarField::disc_pull(
            discmap_from_json(j.at("discmap"), path + "/discmap"));
      }
      throw config_error(path + "/kind", "unknown field kind " + kind);
    } catch (const json::out_of_range&) {
      throw config_error(path, "missing parameter for field kind " + kind);
    } catch (const std::invalid_argument& e) {
      throw config_error(path, e.what());
    }
  }();
  if (j.contains("fd_step_scale")) {
    out = out.finite_difference_view(
        get_number(j["fd_step_scale"], path + "/fd_step_scale"));
  }
  return out;
}

threshold::PositiveSequence sequence_from_json(const json& j,
                                               const std::string& path) {
  check_keys(j, path, {"kind"}, {"beta", "delta", "value", "values", "gauge"});
  const std::string kind = get_string(j["kind"], path + "/kind");
  try {
    if (kind == "power-of-index") {
      return threshold::PositiveSequence::power_of_index(
          get_number(j.at("beta"), path + "/beta"));
    }
    if (kind == "geometric") {
      return threshold::PositiveSequence::geometric(
          get_number(j.at("delta"), path + "/delta"));
    }
    if (kind == "constant") {
      const double value =
          j.contains("value") ? get_number(j["value"], path + "/value") : 1.0;
      return threshold::PositiveSequence::constant(value);
    }
    if (kind == "explicit") {
      return threshold::PositiveSequence::explicit_values(
          get_number_list(j.at("values"), path + "/values"));
    }
    if (kind == "from-gauge") {
      return threshold::PositiveSequence::from_gauge(
          gauge_from_json(j.at("gauge"), path + "/gauge"));
    }
  } catch (const json::out_of_range&) {
    throw config_error(path, "missing parameter for sequence kind " + kind);
  } catch (const std::invalid_argument& e) {
    throw config_error(path, e.what());
  }
  throw config_error(path + "/kind", "unknown sequence kind " + kind);
}

std::function<double(int)> scales_from_json(const json& j,
                                            const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "unit") {
      return [](int) { return 1.0; };
    }
    throw config_error(path, "unknown scale preset " + j.get<std::string>());
  }
  check_keys(j, path, {"kind"}, {"ratio", "values", "gauge", "delta"});
  const std::string kind = get_string(j["kind"], path + "/kind");
  if (kind == "geometric") {
    const double ratio = get_number(j.at("ratio"), path + "/ratio");
    if (!(ratio > 0.0)) throw config_error(path + "/ratio", "must be positive");
    return [ratio](int k) { return std::pow(ratio, k); };
  }
  if (kind == "explicit") {
    auto values = get_number_list(j.at("values"), path + "/values");
    for (double v : values) {
      if (!(v > 0.0)) throw config_error(path + "/values", "must be positive");
    }
    return [values](int k) {
      if (k < 1 || static_cast<std::size_t>(k) > values.size()) {
        throw std::domain_error("scale index beyond the explicit list");
      }
      return values[k - 1];
    };
  }
  if (kind == "from-gauge") {
    auto g = std::make_shared<const gauges::GaugeFunction>(
        gauge_from_json(j.at("gauge"), path + "/gauge"));
    return [g](int k) { return g->at_log_scale(k * std::log(2.0)); };
  }
  throw config_error(path + "/kind", "unknown scale kind " + kind);
}

}  // namespace lil::config
