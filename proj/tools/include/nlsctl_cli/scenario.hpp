#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nlsctl_cli/config.hpp"

namespace nlsctl::cli {

enum class Subcommand { forward, optimize, gradcheck, diagnose, stability };

Subcommand parse_subcommand(const std::string& name);
std::string to_string(Subcommand command);

/// Files written by one scenario, relative to the output directory.
struct ScenarioResult {
  std::vector<std::string> files;
};

/// Runs one scenario and writes its artifacts plus manifest.json into `out`.
/// Every emitted file records the config hash and base seed. Errors from the
/// core library propagate (BlowUpError carries the last valid time).
ScenarioResult run_scenario(const RunConfig& config, Subcommand command,
                            const std::filesystem::path& out);

/// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowUp = 3;
inline constexpr int kExitFailure = 4;

}  // namespace nlsctl::cli
