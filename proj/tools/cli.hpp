#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace caustic::cli {

enum ExitCode { kOk = 0, kInputError = 1, kDegenerate = 2, kInconsistent = 3 };

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`; nothing is written to `out` on failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace caustic::cli
