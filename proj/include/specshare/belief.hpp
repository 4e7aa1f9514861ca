#pragma once

#include <cstddef>

#include "specshare/markov_core.hpp"

namespace specshare {

using ChannelId = std::size_t;

/// What the SU knows about one channel: the occupancy it last observed and
/// how many slots ago that was (age of information, always >= 1).
struct BeliefState {
  Occupancy last_observed = Occupancy::Occupied;
  int age = 1;

  friend bool operator==(const BeliefState&, const BeliefState&) = default;
};

}  // namespace specshare
