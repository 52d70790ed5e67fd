#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chshq::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,
  kInvariantViolation = 3,
  kCapExceeded = 4,
  kIoFailure = 5,
};

/// Runs one invocation. `args` excludes the program name. Documents go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chshq::cli
