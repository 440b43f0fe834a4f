#pragma once

#include <iosfwd>

namespace thaad {

/// Full command-line entry point: parses argv, runs one subcommand and
/// reports through the given streams. Returns the process exit code:
/// 0 on success, 2 on input or usage errors, 1 on unexpected failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace thaad
