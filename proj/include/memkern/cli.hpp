#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace memkern {

// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitSelftest = 1,
    kExitConfig = 2,
    kExitGeneration = 3,
    kExitOptimization = 4,
    kExitGridMismatch = 5,
    kExitSolverOrder = 6,
};

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace memkern
