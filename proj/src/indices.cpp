#include "specshare/indices.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace specshare {

IndexValue IndexValue::finite(double v) {
  if (!(v >= 0.0) || std::isinf(v)) throw std::invalid_argument("finite index must be >= 0");
  return IndexValue(v);
}

IndexValue whittle_index(const BeliefState& belief, const ChannelParams& params) {
  if (belief.age < 1) throw std::invalid_argument("age must be >= 1");
  if (belief.last_observed == Occupancy::Free) return IndexValue::infinite();
  return IndexValue::finite(whittle_value(params, belief.age));
}

IndexValue heuristic_index(const BeliefState& belief, const ChannelParams& params) {
  if (belief.age < 1) throw std::invalid_argument("age must be >= 1");
  if (belief.last_observed == Occupancy::Free) return IndexValue::infinite();
  return IndexValue::finite(heuristic_value(params, belief.age));
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

IndexValue correlated_index(int channel_number, bool observed_occupied, const BandBelief& belief,
                            int band_width) {
  if (band_width < 1) throw std::invalid_argument("band width must be >= 1");
  if (!(belief.mean_age >= 1.0)) throw std::invalid_argument("mean age must be >= 1");
  if (!observed_occupied) return IndexValue::infinite();

  const double offset = channel_number - belief.center;
  const double spread = std::sqrt(belief.mean_age);
  const double half = 0.5 * band_width;
  const double free_prob =
      1.0 - std_normal_cdf((offset + half) / spread) + std_normal_cdf((offset - half) / spread);
  return IndexValue::finite(std::max(0.0, free_prob) * offset * offset);
}

BandBelief update_band_belief(const BandBelief& belief, std::span<const BandObservation> observed,
                              std::span<const int> ages, int total_channels) {
  if (total_channels < 1) throw std::invalid_argument("total_channels must be >= 1");
  BandBelief next = belief;

  double sum = 0.0;
  int count = 0;
  for (const auto& obs : observed) {
    if (obs.occupancy == Occupancy::Occupied) {
      sum += obs.channel_number;
      ++count;
    }
  }
  if (count > 0) {
    next.center = belief.memory * belief.center + (1.0 - belief.memory) * (sum / count);
  }
  next.center = std::clamp(next.center, 1.0, static_cast<double>(total_channels));

  if (!ages.empty()) {
    double total_age = 0.0;
    for (int a : ages) total_age += a;
    next.mean_age = std::max(1.0, total_age / static_cast<double>(ages.size()));
  }
  return next;
}

}  // namespace specshare
