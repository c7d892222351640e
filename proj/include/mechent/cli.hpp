#pragma once

#include <iosfwd>

namespace mechent {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfigError = 2,
    kExitIntegrationError = 3,
};

/// Entry point of the `mechent` command line tool.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mechent
