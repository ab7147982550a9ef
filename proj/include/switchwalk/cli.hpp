#pragma once

#include <ostream>

namespace switchwalk::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_check_failed = 2;

/// Environment variable consulted for the default --seed.
inline constexpr const char* seed_env_var = "SWITCHWALK_SEED";

/// Entry point of the `switchwalk` tool. Reports go to `out` (or --out), diagnostics
/// and usage text to `err`. Nothing is written to the report destination unless
/// every flag validated and the command ran to completion.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace switchwalk::cli
