#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nhvqe {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitConvergence = 3,
  kExitIo = 4,
};

/// Runs the tool on `args` (without the program name). Results go to `out`
/// unless `--out` redirects them; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nhvqe
