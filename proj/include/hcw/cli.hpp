#pragma once

#include <string>
#include <vector>

namespace hcw {

/// Runs one CLI invocation (argv without the program name). Deterministic
/// given the inputs and --seed; exit codes: 0 success, 1 verification
/// failure, 2 usage error.
int run_command(const std::vector<std::string>& argv, std::string& out, std::string& err);

}  // namespace hcw
