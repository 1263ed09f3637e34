#pragma once

// The four pipelines behind the `conley` executable. Each returns the report
// and the process exit code; none of them throws.

#include <string>

#include "config.hpp"

namespace conley::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,  // unequal verdict or an unexpected error
  kConfigError = 2,
  kNotStabilized = 3,
  kNonIsolating = 4,
  kNonTransverse = 5,
};

struct CommandResult {
  int exit_code = kSuccess;
  Json report;
};

CommandResult cmd_ecoh(const RunConfig& config);
CommandResult cmd_conley(const RunConfig& config);
CommandResult cmd_floer(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);

/// Loads the config (if any), applies the overrides and dispatches.
/// Config problems end up in the report with exit code 2.
CommandResult run_command(const std::string& command, const std::string& config_path, const Overrides& overrides);

/// Exit code for an exception escaping a pipeline.
int exit_code_for(const std::exception& error);

}  // namespace conley::cli
