#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lsbd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

/// Runs `lsbd <subcommand> ...`; args[0] is the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lsbd::cli
