#pragma once

// Subcommand drivers. Each reads a validated RunConfig, writes its files
// under `out`, and returns a summary of the headline numbers.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wgsim/config.hpp"

namespace wgsim::app {

struct RunSummary {
  std::vector<std::filesystem::path> files;
  std::map<std::string, double> metrics;
  std::vector<std::string> warnings;
};

RunSummary run_states(const RunConfig& cfg, const std::filesystem::path& out);
RunSummary run_twomode(const RunConfig& cfg, const std::filesystem::path& out);
RunSummary run_cutoff_study(const RunConfig& cfg, const std::filesystem::path& out);
RunSummary run_fourmode(const RunConfig& cfg, const std::filesystem::path& out);
RunSummary run_classify(const RunConfig& cfg, const std::filesystem::path& out);

/// Dispatches on cfg.command.
RunSummary run(const RunConfig& cfg, const std::filesystem::path& out);

/// Relative spread of the total photon number along a trajectory.
double occupation_drift(const std::vector<CorrelationSet>& rows);

inline constexpr double kConservationTol = 1e-8;

}  // namespace wgsim::app
