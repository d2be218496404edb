// Batch experiment runner for random positive matrix products.
//
// Every subcommand reads one JSON config (--config), applies the CLI
// overrides, writes out/manifest.json first and then its CSV/JSON artifacts.
// Reruns with identical config and seed produce byte-identical CSVs
// regardless of --threads.
//
// Exit codes: 0 ok, 2 config error, 3 numeric failure.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "matprod/errors.hpp"
#include "matprod/experiment.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool has_seed = false, has_threads = false, has_out = false, quiet = false;
};

void add_common_flags(CLI::App* cmd, Overrides* ov) {
  cmd->add_option("--config", ov->config_path, "JSON config file")
      ->envname("MATPROD_CONFIG")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", ov->seed, "64-bit master seed")
      ->envname("MATPROD_SEED")
      ->each([ov](const std::string&) { ov->has_seed = true; });
  cmd->add_option("--threads", ov->threads, "worker threads (0 = hardware)")
      ->envname("MATPROD_THREADS")
      ->each([ov](const std::string&) { ov->has_threads = true; });
  cmd->add_option("--out", ov->out_dir, "output directory")
      ->envname("MATPROD_OUT")
      ->each([ov](const std::string&) { ov->has_out = true; });
  cmd->add_flag("--quiet", ov->quiet, "suppress progress output")->envname("MATPROD_QUIET");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matprod: products of positive random matrices, limit-theorem experiments"};
  app.require_subcommand(1);

  Overrides ov;
  std::string chosen;
  for (const std::string& name : matprod::experiment_subcommands()) {
    CLI::App* cmd = app.add_subcommand(name);
    add_common_flags(cmd, &ov);
    cmd->callback([&chosen, name]() { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 2;
  }

  try {
    matprod::ExperimentConfig cfg = ov.config_path.empty()
                                        ? matprod::default_config()
                                        : matprod::load_config_file(ov.config_path);
    if (ov.has_seed) cfg.seed = ov.seed;
    if (ov.has_threads) cfg.threads = ov.threads;
    if (ov.has_out) cfg.out_dir = ov.out_dir;
    if (ov.quiet) cfg.quiet = true;

    auto files = matprod::run_experiment(chosen, cfg);
    if (!cfg.quiet) {
      for (const auto& f : files) std::fprintf(stderr, "wrote %s\n", f.c_str());
    }
    return 0;
  } catch (const matprod::ConfigError& e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 2;
  } catch (const matprod::PreconditionError& e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: numeric: %s\n", e.what());
    return 3;
  }
}
