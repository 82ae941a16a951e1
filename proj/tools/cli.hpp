#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace herdbook::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Runs the command line `args` (without the program name). Returns the exit
/// code: 0 on success, 2 for configuration errors, 3 for runtime or data
/// errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace herdbook::cli
