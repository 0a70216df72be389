#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace renyi::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_usage = 2;

/// Subcommands: entropy, reconstruct, gradient, verify.
/// args[0] is the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

} // namespace renyi::cli
