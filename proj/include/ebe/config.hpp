#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ebe/canonical.hpp"
#include "ebe/dissipators.hpp"
#include "ebe/propagate.hpp"
#include "ebe/systems.hpp"

namespace ebe {

enum class SystemType { TwoLevel, Oscillator, Explicit };
enum class InitialKind { Gibbs, Level, Matrix };
enum class OutputWhat { Populations, Coherences, Diagnostics, All };

/// One scenario, as read from a sectioned key-value file. See docs in README.
struct ScenarioConfig {
  SystemType system_type = SystemType::TwoLevel;
  TwoLevelSystem two_level;        // system_type == TwoLevel
  LadderSystem ladder;             // Oscillator and Explicit
  std::optional<BathModel> bath;   // required for oscillators, optional otherwise
  std::size_t levels = 0;          // oscillator N
  double spacing = 0.0;            // oscillator level spacing
  CouplingRule coupling;           // oscillator coupling rule
  std::vector<double> couplings;   // materialized gamma_i (oscillator)
  double Gamma_pd = 0.0;

  DissipatorKind kind = DissipatorKind::EBE2;
  bool unitary = true;

  InitialKind initial = InitialKind::Level;
  double initial_T = 1.0;
  std::size_t initial_level = 0;
  std::filesystem::path initial_file;

  double t_final = 10.0;
  double dt = 0.01;
  Method method = Method::Expm;
  std::size_t record_every = 1;

  std::string output_path;  // empty: subcommand default
  OutputWhat what = OutputWhat::All;
  std::vector<std::pair<std::size_t, std::size_t>> coherences;

  std::size_t verify_draws = 1000;

  std::size_t bench_applications = 1'000'000;
  std::size_t bench_repeats = 5;
  std::size_t bench_pool = 1024;

  double canonical_T0 = 0.0;  // 0: not configured
  std::optional<std::size_t> edge_margin;

  std::size_t dim() const noexcept {
    return system_type == SystemType::TwoLevel ? 2 : ladder.levels();
  }
  /// Bath temperature for Gibbs comparisons, if one is known.
  std::optional<double> bath_temperature() const;
};

/// Parses and validates a scenario. Syntax errors carry the line number;
/// semantic problems are all collected and thrown together as ConfigErrors.
ScenarioConfig parse_config(std::string_view text,
                            const std::filesystem::path& base_dir = std::filesystem::path("."));
ScenarioConfig load_config(const std::filesystem::path& path);

RhsSpec make_rhs(const ScenarioConfig& config);
ComplexMatrix make_initial_state(const ScenarioConfig& config);

}  // namespace ebe
