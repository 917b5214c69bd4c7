#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace tbl::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2 };

/// Runs one command line (args[0] is the program name) and returns the exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace tbl::cli
