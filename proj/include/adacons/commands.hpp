#pragma once

#include <ostream>
#include <string>

#include "adacons/scenario_file.hpp"

namespace adacons {

/// Process exit codes shared by all subcommands.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,       // bad arguments or unwritable output
  kExitValidation = 2,  // scenario rejected (including numerical design failures)
  kExitDivergence = 3,  // simulation produced a non-finite state
};

/// Simulate a scenario; writes the trajectory CSV, text report, JSON
/// summary and (when enabled) the error-norm and gain plots into out_dir.
int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            const ScenarioOverrides& overrides, std::ostream& out, std::ostream& err);

/// Print design and residual-set constants without simulating.
int cmd_bounds(const std::string& scenario_path, const ScenarioOverrides& overrides,
               std::ostream& out, std::ostream& err);

/// Run the configured robust scenario next to a copy with phi forced to
/// zero and report the gain-growth contrast.
int cmd_drift_demo(const std::string& scenario_path, const std::string& out_dir,
                   const ScenarioOverrides& overrides, std::ostream& out, std::ostream& err);

}  // namespace adacons
