#pragma once

#include <cstdint>
#include <limits>

#include "specshare/markov_core.hpp"

namespace specshare {

/**
 * Free-origin transition counts for one channel.
 *
 * With forgetting = 1 these are plain cumulative counts (the MLE). With
 * forgetting < 1 every `window_length` slots the counts are decayed to
 * floor(forgetting * count) before new transitions are added (EW-MLE).
 */
struct TransitionCounts {
  std::uint64_t n01 = 0;
  std::uint64_t n00 = 0;
  std::uint64_t window_position = 0;
  double forgetting = 1.0;
  std::uint64_t window_length = std::numeric_limits<std::uint64_t>::max();

  static TransitionCounts cumulative() { return {}; }
  static TransitionCounts windowed(std::uint64_t window_length, double forgetting);

  std::uint64_t total() const noexcept { return n01 + n00; }

  friend bool operator==(const TransitionCounts&, const TransitionCounts&) = default;
};

inline constexpr double kMinEstimate = 1e-4;
inline constexpr double kMaxEstimate = 0.5 - 1e-4;
inline constexpr double kDefaultPriorQ = 0.3;

/// Count one observed transition between consecutive slots on the same
/// channel. Only transitions out of the free state are counted.
[[nodiscard]] TransitionCounts record(TransitionCounts counts, Occupancy from, Occupancy to);

/// n01 / (n01 + n00) clamped to [1e-4, 0.5 - 1e-4], or prior_q with no data.
double estimate(const TransitionCounts& counts, double prior_q = kDefaultPriorQ);

/// Per-slot tick. Call once at the start of every slot, before that slot's
/// record(); decays the counts when the previous slot closed a window.
[[nodiscard]] TransitionCounts advance_window(TransitionCounts counts);

}  // namespace specshare
