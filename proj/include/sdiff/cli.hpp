#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdiff {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,       // bad flags, unreadable or invalid input
    kExitGuard = 2,       // size cap refused the run
    kExitInfeasible = 3,  // no finite-time solution
};

/// Runs one command line (args excludes the program name) and returns the
/// exit code. Normal output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdiff
