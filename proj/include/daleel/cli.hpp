#pragma once

#include <string>
#include <vector>

namespace daleel::cli {

/// Runs one CLI invocation; `args` excludes the program name.
/// Returns the process exit status (0 on success) and reports errors as a
/// one-line diagnostic on stderr.
int run(const std::vector<std::string>& args);

} // namespace daleel::cli
