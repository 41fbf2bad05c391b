#pragma once

#include <iosfwd>

namespace hardpair {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitConvergence = 3 };

/// Parses argv, dispatches the subcommand and maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hardpair
