#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dgd::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2 };

/// Runs the `dgd` command line. args[0] is the program name. Normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dgd::cli
