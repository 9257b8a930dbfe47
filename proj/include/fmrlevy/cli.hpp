#pragma once

#include <iosfwd>

namespace fmrlevy::cli {

enum ExitCode : int { ok = 0, input_error = 2, numeric_error = 3, budget_exceeded = 4 };

/// Runs one CLI command. Results go to `out` (or the --out file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fmrlevy::cli
