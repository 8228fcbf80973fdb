#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lil::verify {

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<std::string> module_names();

// Runs the invariant suite of one module ("gauges", "field", "martingale",
// "cascade", "disc", "threshold"). Throws std::invalid_argument for an
// unknown module name.
std::vector<CheckResult> run_module(const std::string& module,
                                    std::uint64_t seed, int threads);

std::vector<CheckResult> run_all(std::uint64_t seed, int threads);

}  // namespace lil::verify
