// Pipeline execution behind the CLI: runs the named solver, writes the
// artifact files and report.json, and returns the process exit code.
#pragma once

#include "aniso/config.hpp"

namespace aniso {

// Exit codes: 0 all checks pass, 1 a verification check failed,
// 2 configuration or schema error, 3 solver failure.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitConfig = 2,
    kExitSolver = 3,
};

int run(const RunConfig& cfg);

}  // namespace aniso
