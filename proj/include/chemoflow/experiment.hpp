#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "chemoflow/config.hpp"

namespace chemoflow {

// Exit codes of run_experiment / the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailedChecks = 1;    // FAIL verdicts or invariant counters
inline constexpr int kExitUnsupported = 2;     // regime outside the three cases
inline constexpr int kExitBlowup = 3;          // integration produced non-finite values
inline constexpr int kExitInsufficient = 4;    // too few samples to analyze
inline constexpr int kExitNoSandwich = 5;      // bracketing never reached

// Fixed CSV schema of the per-sample series.
std::string csv_header();

struct RunArtifacts {
  int exit_code = kExitFailedChecks;
  std::string csv_path;
  std::string json_path;
  std::string plot_path;
  nlohmann::json summary;
};

// Runs one experiment and writes series.csv, summary.json and plot.py under
// out_dir. On blow-up the partial CSV is retained and the summary records the
// last valid time.
RunArtifacts run_experiment(const Config& cfg, const std::string& out_dir);

// Cartesian sweep over (a1, a2); each point runs independently in up to
// `jobs` workers and failures are recorded per point without aborting the
// sweep. The aggregate (also written to out_dir/sweep.json) contains no
// timing metadata, so repeated sweeps compare byte-identical.
nlohmann::json sweep(const Config& base, const std::vector<double>& a1_values,
                     const std::vector<double>& a2_values, int jobs, const std::string& out_dir);

// RateConstants as JSON (the `rates` subcommand payload).
nlohmann::json rate_constants_json(const RateConstants& rc);

}  // namespace chemoflow
