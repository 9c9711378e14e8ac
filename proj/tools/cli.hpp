#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace catscore::cli {

enum ExitCode : int {
    kOk = 0,
    kWarnings = 1,
    kInputError = 2,
    kProviderError = 3,
};

/// Runs the command line `args` (args[0] is the program name). Normal
/// output goes to `out`; every failure writes exactly one line of the
/// form "error: <Kind>: <message>" to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace catscore::cli
