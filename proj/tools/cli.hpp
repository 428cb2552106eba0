#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace softbandit::cli {

// Exit statuses of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kDataError = 2,
  kServiceError = 3,
};

// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace softbandit::cli
