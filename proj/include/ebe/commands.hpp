#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ebe/config.hpp"

namespace ebe {

inline constexpr std::uint64_t kDefaultSeed = 20251016;

struct RunOptions {
  std::uint64_t seed = kDefaultSeed;
  std::filesystem::path out_dir = ".";
};

struct RunResult {
  int exit_code = 0;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;  // one-line summaries for stdout
};

// Subcommands. Each writes its files into options.out_dir and returns 0 on
// success, 2 when a numerical check fails. Exceptions propagate.
RunResult run_simulate(const ScenarioConfig& cfg, const RunOptions& options);
RunResult run_fixed_point(const ScenarioConfig& cfg, const RunOptions& options);
RunResult run_verify_algebra(const ScenarioConfig& cfg, const RunOptions& options);
RunResult run_canonical(const ScenarioConfig& cfg, const RunOptions& options);
RunResult run_bench(const ScenarioConfig& cfg, const RunOptions& options);

RunResult run(const std::string& subcommand, const ScenarioConfig& cfg, const RunOptions& options);

/// Full command line front end: `ebe <subcommand> --config <path> [--seed N] [--out <dir>]`.
/// Failures print one JSON error record to `err`. Exit codes: 0 ok, 1 validation, 2 numerical.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ebe
