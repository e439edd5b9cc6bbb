#pragma once

#include <ostream>
#include <span>
#include <string>

namespace vjface::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_operational = 1;
inline constexpr int exit_usage = 2;

/// Runs one `vjface` subcommand. `args` excludes the program name.
/// Returns 0 on success, 1 on operational errors, 2 on usage errors.
int cli_run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace vjface::cli
