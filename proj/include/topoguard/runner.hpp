#pragma once

#include <string>
#include <vector>

namespace topoguard {

/// Full CLI entry point: parses args (including --config files), dispatches
/// one subcommand, writes artifacts. Returns the process exit code:
/// 0 success, 1 validation error, 2 numerical failure.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace topoguard
