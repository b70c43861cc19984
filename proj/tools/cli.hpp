#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace maxlog::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2 };

/// Runs the `maxloghash` command line. `args` excludes the program name.
/// Primary output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxlog::cli
