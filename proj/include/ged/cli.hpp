#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ged::app {

// Exit codes: 0 success, 2 parse/validation failure, 3 infeasible solve,
// 64 usage errors (unknown subcommand or flag).
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitUsage = 64;

// Subcommands: validate, solve, audit, baselines, simulate, oracle, adapt.
// A thin shell over the library calls; reports go to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ged::app
