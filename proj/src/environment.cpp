#include "specshare/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specshare {

QSchedule::QSchedule(std::vector<std::pair<std::int64_t, double>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw std::invalid_argument("schedule needs at least one knot");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const double q = knots_[i].second;
    if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("scheduled q must lie in (0, 0.5)");
    if (i > 0 && knots_[i].first <= knots_[i - 1].first) {
      throw std::invalid_argument("schedule knots must be strictly increasing in slot");
    }
  }
}

QSchedule QSchedule::ramp(double q_start, double q_end, std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("ramp horizon must be >= 1");
  return QSchedule({{0, q_start}, {horizon, q_end}});
}

double QSchedule::at(std::int64_t slot) const {
  if (knots_.empty()) throw std::logic_error("empty schedule");
  if (slot <= knots_.front().first) return knots_.front().second;
  if (slot >= knots_.back().first) return knots_.back().second;
  const auto upper = std::upper_bound(knots_.begin(), knots_.end(), slot,
                                      [](std::int64_t s, const auto& k) { return s < k.first; });
  const auto lower = upper - 1;
  const double t = static_cast<double>(slot - lower->first) /
                   static_cast<double>(upper->first - lower->first);
  return lower->second + t * (upper->second - lower->second);
}

std::vector<QSchedule> default_nonstationary_schedule(const std::vector<ChannelParams>& channels,
                                                      std::int64_t horizon, double amplitude) {
  std::vector<QSchedule> schedule;
  schedule.reserve(channels.size());
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const double q0 = std::clamp(channels[i].q(), 0.01, 0.49);
    const double direction = (i % 2 == 0) ? 1.0 : -1.0;
    const double q1 = std::clamp(q0 + direction * amplitude, 0.01, 0.49);
    schedule.push_back(QSchedule::ramp(q0, q1, horizon));
  }
  return schedule;
}

IndependentWorld::IndependentWorld(std::vector<ChannelParams> channels, RandomStream& rng,
                                   std::vector<QSchedule> schedule)
    : channels_(std::move(channels)), schedule_(std::move(schedule)) {
  occupancy_.reserve(channels_.size());
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    occupancy_.push_back(rng.bernoulli(0.5) ? Occupancy::Occupied : Occupancy::Free);
  }
  if (!schedule_.empty() && schedule_.size() != channels_.size()) {
    throw std::invalid_argument("schedule must have one entry per channel");
  }
}

IndependentWorld::IndependentWorld(std::vector<ChannelParams> channels,
                                   std::vector<Occupancy> occupancy,
                                   std::vector<QSchedule> schedule)
    : channels_(std::move(channels)),
      occupancy_(std::move(occupancy)),
      schedule_(std::move(schedule)) {
  if (occupancy_.size() != channels_.size()) {
    throw std::invalid_argument("occupancy length must equal channel count");
  }
  if (!schedule_.empty() && schedule_.size() != channels_.size()) {
    throw std::invalid_argument("schedule must have one entry per channel");
  }
}

double IndependentWorld::q_at(std::size_t i, std::int64_t slot) const {
  return schedule_.empty() ? channels_[i].q() : schedule_[i].at(slot);
}

void IndependentWorld::step(std::int64_t slot, RandomStream& rng) {
  for (std::size_t i = 0; i < occupancy_.size(); ++i) {
    if (rng.bernoulli(q_at(i, slot))) occupancy_[i] = flipped(occupancy_[i]);
  }
}

double round_half_away(double x) { return std::round(x); }

BandWorld::BandWorld(int total_channels, int band_width, int center, double step_sigma)
    : total_channels_(total_channels),
      band_width_(band_width),
      center_(center),
      step_sigma_(step_sigma) {
  if (total_channels_ < 1) throw std::invalid_argument("N must be >= 1");
  if (band_width_ < 1 || band_width_ > total_channels_) {
    throw std::invalid_argument("band width must lie in [1, N]");
  }
  if (center_ < 1 || center_ > total_channels_) throw std::invalid_argument("center must lie in [1, N]");
  if (!(step_sigma_ > 0.0)) throw std::invalid_argument("sigma must be > 0");
}

std::pair<int, int> BandWorld::occupied_range() const {
  const int first = center_ - (band_width_ + 1) / 2 + 1;
  const int last = first + band_width_ - 1;
  return {std::max(first, 1), std::min(last, total_channels_)};
}

bool BandWorld::is_occupied(int channel_number) const {
  const auto [first, last] = occupied_range();
  return channel_number >= first && channel_number <= last;
}

std::vector<Occupancy> BandWorld::occupancy() const {
  std::vector<Occupancy> out(static_cast<std::size_t>(total_channels_), Occupancy::Free);
  const auto [first, last] = occupied_range();
  for (int c = first; c <= last; ++c) out[static_cast<std::size_t>(c - 1)] = Occupancy::Occupied;
  return out;
}

void BandWorld::shift(double displacement) {
  const double moved = round_half_away(center_ + displacement);
  center_ = static_cast<int>(std::clamp(moved, 1.0, static_cast<double>(total_channels_)));
}

void BandWorld::step(RandomStream& rng) { shift(step_sigma_ * rng.gaussian()); }

}  // namespace specshare
