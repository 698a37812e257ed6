#pragma once

#include <ostream>

namespace copert::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kCheckFailed = 2 };

/// Parses argv, dispatches one subcommand and writes its report to `out`
/// (or to --out FILE). Diagnostics and help text go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace copert::cli
