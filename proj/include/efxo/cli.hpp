#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace efxo::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kNegative = 1,      // refused, not EFX, no orientation, property failed
    kBadInput = 2,      // malformed arguments or input files
    kBudget = 3,        // oracle or generator budget exhausted
};

/// `args` excludes the program name. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace efxo::cli
