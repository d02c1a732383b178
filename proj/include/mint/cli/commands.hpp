#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mint/error.hpp"

namespace mint::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kParseFailure = 2,
  kEstimatorFailure = 3,
  kUsageFailure = 4,
  kSingularDesign = 5,
  kDegenerateResiduals = 6,
};

int exit_code_for(ErrorKind kind);

/// Runs the command line `args` (program name excluded). Results go to
/// `out` unless --output names a file; diagnostics and, when there is no
/// output file, the run manifest go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mint::cli
