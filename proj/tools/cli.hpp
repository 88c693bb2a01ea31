#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plurikernel::cli {

enum ExitCode : int { ok = 0, check_failed = 1, usage_error = 2, numerical_failure = 3 };

/// Runs one command line; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plurikernel::cli
