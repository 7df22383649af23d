#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tanglie::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2 };

/// Runs one subcommand. `args` excludes the program name. The report goes to
/// `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tanglie::cli
