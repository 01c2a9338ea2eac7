#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vq {

enum ExitCode : int {
    exit_ok = 0,
    exit_violation = 1,
    exit_usage = 2,
    exit_numerical = 3,
};

/// Environment variable overriding the default relative tolerance.
inline constexpr const char* kToleranceEnv = "VQ_REL_TOL";

/// Entry point of vqtool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vq
