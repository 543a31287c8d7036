#pragma once

#include <ostream>

namespace qdiv {

// Exit codes of the qdiv tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitParse = 3,
  kExitValidation = 4,
  kExitDimension = 5,
  kExitNotAPreserver = 6,
  kExitParameter = 7,
  kExitOther = 8,
};

/// Runs the command line `argv` (argv[0] is the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdiv
