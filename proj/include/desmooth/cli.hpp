#pragma once

#include <string>
#include <vector>

namespace desmooth {

// Entry point behind the `desmooth` binary; args exclude the program name.
// Returns the process exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace desmooth
