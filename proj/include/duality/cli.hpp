#pragma once

#include <string>
#include <vector>

namespace duality {

/// Entry point behind the command-line binary, callable in-process.
/// `args` excludes the program name. Commands: pattern, run, duality, sweep,
/// uqsd-verify. Returns 0 on success, 1 on usage or validation errors, 2 on
/// runtime failures.
int run_cli(const std::vector<std::string>& args);

}  // namespace duality
