#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rankin::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2 };

// Runs the bookkeeper with argv-style arguments (args[0] is the program name).
// Output goes to `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rankin::cli
