#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lfc::cli {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitFormat = 4,
  kExitInvalidInput = 5,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace lfc::cli
