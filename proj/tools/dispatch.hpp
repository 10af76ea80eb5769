#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace affvol::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_property_failure = 1,
    exit_invalid = 2,   // bad config, bad flags, capability error
    exit_internal = 3,  // solver breakdown or I/O failure
};

// Runs one subcommand.  args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace affvol::cli
