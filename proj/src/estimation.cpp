#include "specshare/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specshare {

TransitionCounts TransitionCounts::windowed(std::uint64_t window_length, double forgetting) {
  if (window_length == 0) throw std::invalid_argument("window length must be >= 1");
  if (!(forgetting > 0.0 && forgetting <= 1.0)) {
    throw std::invalid_argument("forgetting factor must lie in (0, 1]");
  }
  TransitionCounts counts;
  counts.window_length = window_length;
  counts.forgetting = forgetting;
  return counts;
}

TransitionCounts record(TransitionCounts counts, Occupancy from, Occupancy to) {
  if (from != Occupancy::Free) return counts;
  if (to == Occupancy::Occupied) {
    ++counts.n01;
  } else {
    ++counts.n00;
  }
  return counts;
}

double estimate(const TransitionCounts& counts, double prior_q) {
  if (!(prior_q > 0.0 && prior_q < 0.5)) throw std::invalid_argument("prior_q must lie in (0, 0.5)");
  if (counts.total() == 0) return prior_q;
  const double ratio = static_cast<double>(counts.n01) / static_cast<double>(counts.total());
  return std::clamp(ratio, kMinEstimate, kMaxEstimate);
}

namespace {

std::uint64_t decay(std::uint64_t count, double forgetting) {
  return static_cast<std::uint64_t>(std::floor(forgetting * static_cast<double>(count)));
}

}  // namespace

TransitionCounts advance_window(TransitionCounts counts) {
  const bool at_boundary =
      counts.window_position > 0 && counts.window_position % counts.window_length == 0;
  if (at_boundary && counts.forgetting < 1.0) {
    counts.n01 = decay(counts.n01, counts.forgetting);
    counts.n00 = decay(counts.n00, counts.forgetting);
  }
  ++counts.window_position;
  return counts;
}

}  // namespace specshare
