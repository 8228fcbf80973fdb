#pragma once

#include <string>

#include "lil/config.hpp"

namespace lil::experiments {

struct RunResult {
  int exit_code = 0;
  std::string csv;           // RFC 4180 body, deterministic for fixed
                             // (config, seed, thread count)
  std::string csv_filename;  // "<experiment>.csv"
  config::json summary;      // empirical sups, fitted constants, flags
};

// Executes one experiment in memory; does not touch the filesystem.
RunResult run(const config::RunConfig& cfg);

// Writes result.csv and summary.json under out_dir (created if missing).
void write_outputs(const config::RunConfig& cfg, const RunResult& result);

}  // namespace lil::experiments
