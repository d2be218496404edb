#pragma once

#include <string>
#include <vector>

#include "matprod/config.hpp"

namespace matprod {

inline constexpr const char* kToolName = "matprod";
inline constexpr const char* kToolVersion = "0.1.0";

/// Subcommands the experiment runner understands.
std::vector<std::string> experiment_subcommands();

/// Runs one experiment: writes manifest.json first, then the subcommand's
/// CSV/JSON artifacts into cfg.out_dir. Reruns with identical config and seed
/// produce byte-identical files regardless of thread count. Throws
/// ConfigError for bad inputs and NumericError/ConvergenceError for numeric
/// failures; returns the list of files written.
std::vector<std::string> run_experiment(const std::string& subcommand,
                                        const ExperimentConfig& cfg);

}  // namespace matprod
