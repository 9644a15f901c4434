#pragma once

#include "rwmm/config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace rwmm {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitCapacityError = 3,
  kExitVerificationFailed = 4,
};

struct CommandOptions {
  std::filesystem::path config;
  std::vector<std::uint64_t> seeds;  // overrides the config's seeds when non-empty
  std::filesystem::path out;         // overrides the config's output when non-empty
};

/// Runs one CLI subcommand (simulate-discrete, simulate-continuous,
/// verify-channel, analyze, export) and maps errors onto exit codes.
int run_command(std::string_view name, const CommandOptions& options, std::ostream& log, std::ostream& err);

int simulate_discrete(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);
int simulate_continuous(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);
int verify_channel(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);
int analyze(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);
int export_mobility(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);

}  // namespace rwmm
