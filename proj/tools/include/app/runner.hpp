#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ineq::app {

// Exit-code contract shared by every subcommand:
//   0 = pass (converged and within tolerance)
//   1 = ran to completion but failed tolerance / convergence
//   2 = usage error (unknown experiment, invalid config, unreadable input)
//   3 = numeric failure inside the compute kernels
inline constexpr int kExitPass = 0;
inline constexpr int kExitToleranceFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

struct RunOptions {
    std::string out_dir = ".";
    int workers = 0;                 // 0 = all cores
    std::string distance_matrix;     // overrides the config's cloud source
};

// Loads the JSON config, runs the named experiment, writes the sweep CSV and
// the JSON report next to each other under out_dir, prints a one-line summary
// to `out`, and returns the exit code.  The env var INEQFORGE_SEED overrides
// the config seed.
int run_experiment(const std::string& config_path, const RunOptions& options,
                   std::ostream& out, std::ostream& err);

// Prints the k(p,N) sphere moments and unit-ball volumes (text table, or
// machine-readable JSON when json_mode is set).
int print_constants(bool json_mode, std::ostream& out);

// Reads prior report JSONs and prints one row per experiment plus an
// aggregate verdict; exit 0 only when every report passed.
int consolidate_reports(const std::vector<std::string>& paths, std::ostream& out,
                        std::ostream& err);

// Registry listing, for usage messages and the docs generator.
std::vector<std::string> experiment_names();

}  // namespace ineq::app
