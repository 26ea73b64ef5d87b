#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mealy {

enum ExitCode : int {
  exit_ok = 0,
  exit_budget = 1,  ///< an analysis hit its budget or reached no verdict
  exit_input = 2,   ///< unreadable or malformed input, bad arguments
  exit_internal = 3,
};

/// Runs the `mealy` command line; `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mealy
