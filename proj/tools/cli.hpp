#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace planetgen::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kIo = 3, kPort = 4 };

/// Parses `args` (without the program name) and runs one subcommand:
///   generate [--config PATH] [--generator simple|layered] [--seed N] --out PATH [--depth D]
///   verify   [--config PATH] [--generator simple|layered] [--seed N] [--samples N]
///   serve    [--config PATH] [--generator simple|layered] [--seed N] [--port P] [--host ADDR]
/// serve blocks until SIGINT or SIGTERM.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace planetgen::cli
