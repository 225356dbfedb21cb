#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jensen::cli {

enum ExitCode : int {
  kVerified = 0,
  kViolated = 1,
  kInvalid = 2,
};

/// Runs the tool on `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jensen::cli
