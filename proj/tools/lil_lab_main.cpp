// lil-lab: config-driven experiment runner for the iterated-logarithm lab.
//
//   lil-lab run <config.json> [--threads N] [--out DIR]
//   lil-lab verify [--module NAME] [--seed S] [--threads N]
//
// Exit codes: 0 success, 1 verification failure, 2 schema/usage errors.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lil/config.hpp"
#include "lil/experiments.hpp"
#include "lil/parallel.hpp"
#include "lil/verify.hpp"

namespace {

int run_command(const std::string& config_path, int threads,
                const std::string& out_dir) {
  lil::config::RunConfig cfg;
  try {
    cfg = lil::config::parse_file(config_path);
  } catch (const lil::config::config_error& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return 2;
  }
  if (threads > 0) cfg.threads = threads;  // flag wins over config and env
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  try {
    const auto result = lil::experiments::run(cfg);
    lil::experiments::write_outputs(cfg, result);
    std::cout << cfg.experiment << ": wrote " << result.csv_filename
              << " and summary.json under " << cfg.out_dir << "\n";
    return result.exit_code;
  } catch (const lil::config::config_error& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return 2;
  }
}

int verify_command(const std::string& module, std::uint64_t seed,
                   int threads) {
  const int nt = threads > 0 ? threads : lil::par::default_threads();
  std::vector<lil::verify::CheckResult> results;
  try {
    results = module.empty() ? lil::verify::run_all(seed, nt)
                             : lil::verify::run_module(module, seed, nt);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.module << "/"
              << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << "\n";
    if (!r.passed) ++failures;
  }
  std::cout << results.size() - failures << "/" << results.size()
            << " checks passed\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for iterated-logarithm growth bounds"};
  app.require_subcommand(1);

  std::string config_path, out_dir, module;
  int threads = 0;
  std::uint64_t seed = 1;

  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "path to the experiment config")
      ->required();
  run->add_option("--threads", threads, "worker threads (default: config, "
                                        "then LIL_LAB_THREADS, then cores)");
  run->add_option("--out", out_dir, "output directory");

  auto* verify = app.add_subcommand("verify", "run module invariant suites");
  verify->add_option("--module", module, "restrict to one module");
  verify->add_option("--seed", seed, "seed for randomized checks");
  verify->add_option("--threads", threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return run_command(config_path, threads, out_dir);
  return verify_command(module, seed, threads);
}
