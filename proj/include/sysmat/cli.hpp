#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sysmat::cli {

inline constexpr const char* kVersion = "0.1.0";
/// Environment variable overriding the default rank tolerance.
inline constexpr const char* kTolEnv = "SYSMAT_TOL";

enum ExitCode : int { ok = 0, usage = 1, structural = 2, divergence = 3 };

/// Runs one `sysmat` invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sysmat::cli
