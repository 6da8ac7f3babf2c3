#pragma once

#include <string>
#include <vector>

namespace frobenius::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2, kNumerical = 3 };

/// Runs one command line (without the program name). Output files go to
/// --out-dir, else $FROBENIUS_OUT_DIR, else the working directory.
int run(const std::vector<std::string>& args);

}  // namespace frobenius::cli
