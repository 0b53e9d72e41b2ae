#pragma once

#include <iosfwd>

namespace thunder::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the `thunder` binary and the tests. Subcommands:
/// render, analyze, serve.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thunder::cli
