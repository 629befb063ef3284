#pragma once

#include "run_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace diraclab::cli {

enum ExitCode { exit_pass = 0, exit_fail = 1, exit_config = 2 };

const std::vector<std::string>& command_names();

struct Invocation {
  std::string command;
  std::string check;  // zero-mode sub-check; empty means all
  RunConfig config;
};

/// Resolves defaults and validates parameter ranges for the command. Throws ConfigError.
void validate(const Invocation& inv);

/// Runs one campaign, writes its reports, manifest.json and run_metadata.json
/// into the output directory, and returns exit_pass or exit_fail.
/// Throws ConfigError for configuration problems.
int run(const Invocation& inv, std::ostream& log);

}  // namespace diraclab::cli
