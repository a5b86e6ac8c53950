#pragma once

#include <iosfwd>

namespace prophet {

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

// Parses arguments and runs one subcommand; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& err);

}  // namespace prophet
