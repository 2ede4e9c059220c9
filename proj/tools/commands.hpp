#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace gaborfio::cli {

std::vector<std::string> subcommand_names();
std::string subcommand_description(const std::string& name);

// Runs one subcommand, writing reports into cfg.output. Returns the exit
// status (0, or 3 when selftest criteria fail); library errors propagate.
int run_subcommand(const std::string& name, const ExperimentConfig& cfg);

}  // namespace gaborfio::cli
