#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "specshare/markov_core.hpp"
#include "specshare/random.hpp"

namespace specshare {

/// Piecewise-linear q(t) through (slot, q) knots; constant outside the knots.
class QSchedule {
 public:
  QSchedule() = default;
  explicit QSchedule(std::vector<std::pair<std::int64_t, double>> knots);

  /// Straight ramp from q_start at slot 0 to q_end at slot `horizon`.
  static QSchedule ramp(double q_start, double q_end, std::int64_t horizon);

  bool empty() const noexcept { return knots_.empty(); }
  double at(std::int64_t slot) const;
  const auto& knots() const noexcept { return knots_; }

 private:
  std::vector<std::pair<std::int64_t, double>> knots_;
};

/// Alternating up/down ramps of +-amplitude over the horizon, clamped into
/// [0.01, 0.49]. Channel 0, 2, 4, ... ramp up; 1, 3, 5, ... ramp down.
std::vector<QSchedule> default_nonstationary_schedule(const std::vector<ChannelParams>& channels,
                                                      std::int64_t horizon,
                                                      double amplitude = 0.15);

/// N independent symmetric chains, optionally with time-varying q.
class IndependentWorld {
 public:
  /// Initial occupancy is drawn from the stationary distribution (1/2, 1/2).
  IndependentWorld(std::vector<ChannelParams> channels, RandomStream& rng,
                   std::vector<QSchedule> schedule = {});
  IndependentWorld(std::vector<ChannelParams> channels, std::vector<Occupancy> occupancy,
                   std::vector<QSchedule> schedule = {});

  std::size_t size() const noexcept { return occupancy_.size(); }
  Occupancy occupancy(std::size_t i) const { return occupancy_[i]; }
  const std::vector<Occupancy>& occupancy() const noexcept { return occupancy_; }
  const std::vector<ChannelParams>& channels() const noexcept { return channels_; }
  bool is_scheduled() const noexcept { return !schedule_.empty(); }

  /// Flip probability of channel i used for the step out of `slot`.
  double q_at(std::size_t i, std::int64_t slot) const;

  /// Advance every channel one slot; one uniform draw per channel, in order.
  void step(std::int64_t slot, RandomStream& rng);

 private:
  std::vector<ChannelParams> channels_;
  std::vector<Occupancy> occupancy_;
  std::vector<QSchedule> schedule_;
};

/// Round half away from zero.
double round_half_away(double x);

/**
 * One PU holding a contiguous band of B channels whose center performs a
 * discretized Gaussian random walk clamped to [1, N]. Channels are numbered
 * 1..N; the band is {P - ceil(B/2) + 1, ..., P - ceil(B/2) + B}, clipped to
 * [1, N]. For even B this is {P - B/2 + 1, ..., P + B/2}.
 */
class BandWorld {
 public:
  BandWorld(int total_channels, int band_width, int center, double step_sigma);

  int total_channels() const noexcept { return total_channels_; }
  int band_width() const noexcept { return band_width_; }
  int center() const noexcept { return center_; }
  double step_sigma() const noexcept { return step_sigma_; }

  /// First and last occupied channel numbers after clipping.
  std::pair<int, int> occupied_range() const;
  std::vector<Occupancy> occupancy() const;
  bool is_occupied(int channel_number) const;

  /// center <- clamp(round(center + sigma * z), 1, N), z ~ N(0, 1) from
  /// RandomStream::gaussian.
  void step(RandomStream& rng);

  /// Move the center by an explicit displacement (already scaled by sigma).
  void shift(double displacement);

 private:
  int total_channels_;
  int band_width_;
  int center_;
  double step_sigma_;
};

}  // namespace specshare
