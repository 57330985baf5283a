#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cybergeo::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,    // output could not be written, or anything unexpected
  kExitUsage = 2,
  kExitInput = 3,
  kExitInvariant = 4,
};

int run(int argc, char** argv, std::ostream& out, std::ostream& err);
// Arguments without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cybergeo::cli
