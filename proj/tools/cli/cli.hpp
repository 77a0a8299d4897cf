#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evpf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;     // unreadable input, parse failure, write failure
inline constexpr int kExitUsage = 2;  // bad flags or inconsistent configuration

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Every subcommand accepts `--config FILE` (flat key=value);
/// flags on the command line override values from the file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evpf::cli
