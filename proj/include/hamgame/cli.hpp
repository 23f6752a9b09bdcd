#pragma once

// Command-line front end. `run` takes the arguments after the program name so
// tests can drive it in-process.

#include <ostream>
#include <string>
#include <vector>

namespace hamgame::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,      // bad flags, unreadable or malformed files, shape errors
  kExitNotNash = 3,    // verify found a profitable deviation
  kExitNumerical = 4,  // non-Hermitian input, non-PSD states, other numerical failures
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hamgame::cli
