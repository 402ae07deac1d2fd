#pragma once

// Batch command-line interface: JSON in, JSON out, with a run manifest.

#include <iosfwd>
#include <string>
#include <vector>

namespace wem {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitInput = 2 };

/// Runs `wem <args...>` (args excludes the program name), writing the JSON report to out
/// and diagnostics to err. Returns the exit code.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wem
