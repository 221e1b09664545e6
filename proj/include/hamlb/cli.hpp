#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hamlb {

/// Exit codes: 0 when every asserted invariant passes, 1 when one fails or a
/// randomized construction cannot be certified, 2 on usage or config errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `hamlb` tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Version string embedded in every report.
std::string version_string();
std::string git_describe();

}  // namespace hamlb
