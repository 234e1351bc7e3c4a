#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ulam::cli {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kDomain = 2,
  kNumerical = 3,
  kVerification = 4,
};

inline constexpr int kSchemaVersion = 1;

// Runs the tool with `args` (args[0] is the program name), writing results
// to `out` unless --output is given and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ulam::cli
