#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lgf::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kBoundViolated = 1,
    kDomainError = 2,
    kAccuracyError = 3,
    kUsageError = 64,
};

/// Default relative tolerance, overridden by the environment variable of this name.
inline constexpr const char* kRelTolEnv = "LGF_REL_TOL";

/// Runs one command. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lgf::cli
