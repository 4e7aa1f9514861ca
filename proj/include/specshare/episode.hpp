#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "specshare/config.hpp"
#include "specshare/scheduling.hpp"

namespace specshare {

/// Raw counts of one episode plus the normalizations reported in tables.
struct RunMetrics {
  std::uint64_t successes = 0;
  std::uint64_t collisions = 0;
  std::uint64_t attempts = 0;
  /// Successes of an omniscient scheduler that sends on min(L, #free) channels.
  std::uint64_t genie_successes = 0;
  std::int64_t horizon = 0;
  std::size_t budget = 0;
  double gamma = 0.0;
  /// Normalized throughput per completed window, when a window was requested.
  std::vector<double> windowed_throughput;

  double normalized_throughput() const;
  double genie_throughput() const;
  double collision_rate() const;
  double collision_per_attempt() const;
  double objective() const;
  double attempt_fraction() const;
};

/// Called after scoring each slot, before the world advances.
using SlotObserver = std::function<void(std::int64_t slot, const Decision& decision,
                                        std::span<const Occupancy> truth,
                                        const Scheduler& scheduler)>;

struct EpisodeOptions {
  SlotObserver on_slot;
  /// Runs once on the freshly built scheduler (tests use it to install hooks).
  std::function<void(Scheduler&)> configure;
  std::int64_t series_window = 0;
};

/**
 * Simulate one episode of `config.horizon` slots.
 *
 * The seed is split into separate streams for the world, the policy and the
 * initial state, so two policies run with the same seed face the same
 * primary-user trajectory.
 */
RunMetrics run_episode(const ExperimentConfig& config, const PolicySpec& policy, std::uint64_t seed,
                       const EpisodeOptions& options = {});

}  // namespace specshare
