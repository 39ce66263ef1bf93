#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lqsynth {

// Exit codes shared by the command line tool and its tests.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_parse = 2;
inline constexpr int exit_validation = 3;
inline constexpr int exit_synthesis = 4;
inline constexpr int exit_verification = 5;

// Runs the command line interface on already-split arguments (no program name).
// All output goes to the supplied streams so tests can capture it.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lqsynth
