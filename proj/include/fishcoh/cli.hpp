#pragma once

#include <ostream>

namespace fishcoh {

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv, runs one subcommand and writes a single JSON document to out.
/// Usage errors go to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fishcoh
