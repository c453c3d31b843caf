#pragma once

#include <ostream>

namespace effsens::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,        // bad flags or column selectors
  kUnreadable = 2,   // input file missing or unreadable, output not writable
  kNonNumeric = 3,   // malformed CSV cell or row
  kTooFewRows = 4,   // fewer than 40 data rows
  kEstimation = 5,   // estimator rejected the data
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace effsens::cli
