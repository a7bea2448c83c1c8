#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qx::cli {

enum ExitCode : int { ok = 0, check_failed = 1, usage = 2 };

/// Runs `qx` with `args` (program name excluded). Output files named by flags are
/// written directly; everything else goes to `out` and `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace qx::cli
