#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace psbc::cli {

enum ExitCode { kSuccess = 0, kUserError = 1, kInternalError = 2 };

/// Runs one command line. Results go to `out`, the resolved configuration
/// and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psbc::cli
