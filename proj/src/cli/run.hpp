#pragma once

#include "config.hpp"
#include "output.hpp"

namespace lightcone::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kFail = 2, kInapplicable = 3 };

/// Entry point of the `lightcone` tool: `lightcone <command> --config PATH [flags]`.
int run(int argc, char** argv);

/// Report bodies, shared with the Python module.
Json verify_report(const RunConfig& config, const TheoremReport& report);
Json residual_report(const RunConfig& config, const Grid& grid, const ResidualScan& scan);

}  // namespace lightcone::cli
