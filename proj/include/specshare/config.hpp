#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "specshare/markov_core.hpp"
#include "specshare/scheduling.hpp"

namespace specshare {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class WorldKind { Independent, Band };
enum class SweepVariable { None, L, QMax, N, Sigma };

std::string_view to_string(SweepVariable v);
std::string_view to_string(WorldKind w);

/**
 * Everything one experiment needs. Loaded from a flat `key = value` text
 * file (see README for the key list); unknown keys are rejected.
 */
struct ExperimentConfig {
  WorldKind world = WorldKind::Independent;
  std::size_t channels = 32;               ///< N
  std::size_t budget = 4;                  ///< L
  std::optional<double> budget_fraction;   ///< when set, L = max(1, round(N * fraction))
  std::int64_t horizon = 30'000;           ///< T
  std::size_t runs = 100;
  std::uint64_t base_seed = 1;
  double gamma = 0.5;
  std::vector<std::string> policies{"pure_random", "check_empty_random", "whittle", "heuristic"};

  double q_min = 0.1;
  double q_max = 0.5;
  std::vector<double> q_list;  ///< explicit per-channel q; overrides q_min/q_max
  bool nonstationary = false;
  double schedule_amplitude = 0.15;

  SweepVariable sweep = SweepVariable::None;
  std::vector<double> sweep_values;

  std::uint64_t ew_window = 1000;
  double ew_alpha = 0.5;
  double prior_q = kDefaultPriorQ;

  int band_width = 12;
  double band_sigma = 1.0;
  double band_memory = 0.5;
  MeanAgeMode mean_age = MeanAgeMode::AllChannels;
};

/// Parse the key-value format. Non-fatal notices (e.g. q clamped below 0.5)
/// are appended to `warnings` when given. Throws ConfigError.
ExperimentConfig parse_config(std::string_view text, std::vector<std::string>* warnings = nullptr);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::vector<std::string>* warnings = nullptr);

/// Serialize back to the key-value format.
std::string format_config(const ExperimentConfig& config);

/// Throws ConfigError on any violated invariant (L > N, empty policy list, ...).
void validate(const ExperimentConfig& config);

/// Per-channel flip probabilities: explicit list, or evenly spaced from
/// q_min to q_max. Values at or above 0.5 are clamped to 0.5 - 1e-6.
std::vector<ChannelParams> channel_params(const ExperimentConfig& config,
                                          std::vector<std::string>* warnings = nullptr);

/// Fully parameterized policy specs from the config's policy names.
std::vector<PolicySpec> policy_specs(const ExperimentConfig& config);

/// Copy of `config` with the sweep variable set to `value`.
ExperimentConfig apply_sweep_value(const ExperimentConfig& config, double value);

/// Presets for the experiment figures 3..9 (see README).
ExperimentConfig figure_preset(int figure);

}  // namespace specshare
