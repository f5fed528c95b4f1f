#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ibg {

/// Exit codes of the command-line tool.
inline constexpr int kExitPositive = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitOverflow = 3;

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ibg
