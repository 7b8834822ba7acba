#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace volsample::cli {

/// Runs the `volsample` command line. args[0] is the program name.
/// Returns the process exit code: 0 on success, 1 when a verification
/// suite reports failures, 2 on any error (reported as JSON on `err`).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace volsample::cli
