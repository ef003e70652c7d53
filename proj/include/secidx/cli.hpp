#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace secidx {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitCap = 2, kExitInfeasible = 3 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out` as JSON, diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace secidx
