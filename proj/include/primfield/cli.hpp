#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace primfield::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // usage, parse, budget errors
inline constexpr int kExitViolation = 2;

/// Runs one command line (without the program name). Results go to --out when
/// given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace primfield::cli
