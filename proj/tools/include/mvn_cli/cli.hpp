#pragma once

#include "mvn/test_spec.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mvn::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kRejected = 1,     ///< a test rejected and --fail-on-reject was given
  kInputError = 2,   ///< unreadable or degenerate data
  kConfigError = 3,  ///< bad flags, ids or parameter values
};

/// Comma-separated test ids; "default" expands to the standard battery, without
/// HJM when n exceeds 200 (its cost grows like n^4).
std::vector<TestSpec> resolve_tests(const std::string& text, Index n);

/// Runs the tool with `args` (program name excluded). Reports go to `out` unless
/// --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvn::cli
