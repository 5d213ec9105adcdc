#pragma once

#include <ostream>

namespace mkse {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitBlowUp = 3,
  kExitBoundViolation = 4,
  kExitInequalityViolation = 5,
};

/// Entry point of the `mkse` tool with verbs run, sweep, bounds and
/// check-inequalities. Diagnostics go to `err`, summaries to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mkse
