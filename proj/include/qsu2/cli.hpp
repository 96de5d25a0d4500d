#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsu2 {

/// Exit codes of the command-line driver.
enum ExitCode : int { kExitPass = 0, kExitFailure = 1, kExitInvalid = 2, kExitPole = 3 };

/// Runs one command (`args` excludes the program name). The report goes to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsu2
