#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include <json.hpp>

#include "lil/cascade.hpp"
#include "lil/disc.hpp"
#include "lil/field.hpp"
#include "lil/gauges.hpp"
#include "lil/threshold.hpp"

namespace lil::config {

using json = nlohmann::json;

// Schema violation with a JSON-pointer-style path to the offending field.
class config_error : public std::runtime_error {
 public:
  config_error(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = default (flag / env / hardware)
  std::string out_dir = ".";
  json payload;  // experiment-specific keys, already schema-checked
};

// Parses and validates; throws config_error (schema) or json::parse_error.
RunConfig parse(const json& root);
RunConfig parse_file(const std::string& path);

// Component builders (each validates its sub-schema).
gauges::GaugeFunction gauge_from_json(const json& j, const std::string& path);
cascade::CascadeMeasure cascade_from_json(const json& j,
                                          const std::string& path);
disc::DiscMap discmap_from_json(const json& j, const std::string& path);
field::ScalarField field_from_json(const json& j, const std::string& path);
threshold::PositiveSequence sequence_from_json(const json& j,
                                               const std::string& path);
// "unit" | {"kind": "geometric"|"from-gauge"|"explicit", ...}
std::function<double(int)> scales_from_json(const json& j,
                                            const std::string& path);

}  // namespace lil::config
