#pragma once

#include <string>
#include <vector>

namespace anon {

// Runs the command-line interface on the given arguments (without argv[0]).
// Exit codes: 0 success, 1 usage/guard/parse error, 2 infeasible or
// principle violation.
int run_cli(const std::vector<std::string>& args);

}  // namespace anon
