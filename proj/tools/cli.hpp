#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dseg::cli {

enum ExitCode : int {
  kOk = 0,
  kUnreadableInput = 2,
  kInvalidParams = 3,
  kSchemaMismatch = 4,
};

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Worker count for sweeps: DSEG_THREADS when set, else the hardware
/// concurrency, never more than `jobs`. Throws std::invalid_argument on a
/// malformed DSEG_THREADS.
unsigned worker_count(unsigned jobs);

}  // namespace dseg::cli
