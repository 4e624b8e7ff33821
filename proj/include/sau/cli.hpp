#pragma once

#include <string>
#include <vector>

namespace sau {

// Names of the presets baked into the binary, in lexical order.
std::vector<std::string> preset_names();

// Config text for a named preset; throws ConfigError for unknown names.
std::string preset_text(const std::string& name);

// Full command-line entry point. Exit codes: 0 success, 1 runtime failure
// (including a failing check battery), 2 config/usage error.
int run_cli(int argc, char** argv);

}  // namespace sau
