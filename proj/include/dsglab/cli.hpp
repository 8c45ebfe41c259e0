#pragma once

#include <string>
#include <vector>

namespace dsglab {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,      ///< usage or config error
    kExitLos = 3,        ///< simulation completed with loss of synchronization
    kExitNumerical = 4,  ///< numerical failure
};

/// Runs the dsg-lab command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace dsglab
