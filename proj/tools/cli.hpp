#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wontfix::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNonconvergence = 3;

// Runs one command line (args[0] is the program name). Results that are not
// written to a file go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wontfix::cli
