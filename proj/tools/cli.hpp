#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cheshire::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // numeric check failure or IO error
inline constexpr int kExitUsage = 2;        // bad arguments or circuit parse error

// Runs the `cheshire` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cheshire::cli
