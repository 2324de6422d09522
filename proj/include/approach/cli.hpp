#pragma once

// Command-line front end: features, localize, navigate, simulate, evaluate
// and bench subcommands.

#include <iosfwd>

namespace approach::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPipeline = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and runs one subcommand. Results and the advice stream go to
/// `out`; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace approach::cli
