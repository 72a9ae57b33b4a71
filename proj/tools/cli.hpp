#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace corpus_tutor {

enum ExitCode { kExitOk = 0, kExitInvalid = 1, kExitUsage = 2 };

/// Runs the `corpus-tutor` command line. `args` excludes the program name.
/// Prompts and reports go to `out`, diagnostics to `err`; `in` feeds the
/// drill loop. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err);

}  // namespace corpus_tutor
