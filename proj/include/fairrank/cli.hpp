#pragma once

#include <iosfwd>

#include "fairrank/core.hpp"

namespace fairrank::cli {

// Process exit codes, one per error class.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kInvalidInstance = 3,
  kInputOutput = 4,
  kEvaluation = 5,
  kIncompatible = 6,
  kCheckFailed = 7,
};

int exit_code_for(ErrorCode code) noexcept;

/// Entry point of the `fairrank` tool. Reports go to `out`, diagnostics to
/// `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairrank::cli
