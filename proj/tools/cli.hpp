#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace psrank::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name). Data goes to
/// `out` unless --out names a file; summaries and diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream &out, std::ostream &err);

} // namespace psrank::cli
