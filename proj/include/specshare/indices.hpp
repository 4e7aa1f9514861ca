#pragma once

#include <compare>
#include <limits>
#include <span>

#include "specshare/belief.hpp"
#include "specshare/markov_core.hpp"

namespace specshare {

/// Channel priority: a finite nonnegative value, or +infinity for channels
/// last observed free. Ordering is total.
class IndexValue {
 public:
  static constexpr IndexValue infinite() {
    return IndexValue(std::numeric_limits<double>::infinity());
  }
  static IndexValue finite(double v);

  constexpr bool is_infinite() const noexcept { return value_ == infinite().value_; }
  constexpr double value() const noexcept { return value_; }

  friend constexpr bool operator==(IndexValue, IndexValue) = default;
  friend constexpr std::partial_ordering operator<=>(IndexValue a, IndexValue b) {
    return a.value_ <=> b.value_;
  }

 private:
  constexpr explicit IndexValue(double v) : value_(v) {}
  double value_;
};

/// Whittle index of a channel last seen occupied `age` slots ago.
///
/// Evaluated as 1/(1+2q) - G(age), where the gap
///   G = 2q u (1 + q(age-1)) / ((1+2q) (p_age + q - (age-1) q u)),  u = (1-2q)^(age-1),
/// is computed directly. G decays geometrically, so rounding cannot make the
/// index step down as it approaches its limit.
template <typename Scalar>
Scalar whittle_value(const BasicChannelParams<Scalar>& params, int age) {
  if (age < 1) throw std::invalid_argument("whittle_value requires age >= 1");
  if (age == 1) return Scalar(0);
  using std::pow;
  const Scalar q = params.q();
  const Scalar u = pow(params.contraction(), age - 1);
  const Scalar older = Scalar(age - 1);
  const Scalar denominator = flip_prob(params, age) + q - older * q * u;
  const Scalar limit = Scalar(1) / (Scalar(1) + Scalar(2) * q);
  const Scalar gap = Scalar(2) * q * u * (Scalar(1) + q * older) * limit / denominator;
  return limit - gap;
}

/// Expected packets delivered before the first collision when transmitting
/// on a channel last seen occupied `age` slots ago.
template <typename Scalar>
Scalar heuristic_value(const BasicChannelParams<Scalar>& params, int age) {
  return flip_prob(params, age) / params.q();
}

IndexValue whittle_index(const BeliefState& belief, const ChannelParams& params);
IndexValue heuristic_index(const BeliefState& belief, const ChannelParams& params);

/// Standard normal CDF.
double std_normal_cdf(double x);

/// SU estimate of the PU band: center (channel-number units, 1..N), the
/// blending memory, and the mean age used as the center's variance.
struct BandBelief {
  double center = 1.0;
  double memory = 0.5;
  double mean_age = 1.0;
};

/// Correlated-band index for the channel numbered `channel_number` (1-based).
IndexValue correlated_index(int channel_number, bool observed_occupied, const BandBelief& belief,
                            int band_width);

/// A channel observation keyed by 1-based channel number.
struct BandObservation {
  int channel_number;
  Occupancy occupancy;
};

/**
 * Blend the band center toward the mean channel number of the channels seen
 * occupied this slot (unchanged when none were), clamp it to [1, N], and
 * set mean_age to the mean of `ages`.
 */
BandBelief update_band_belief(const BandBelief& belief, std::span<const BandObservation> observed,
                              std::span<const int> ages, int total_channels);

}  // namespace specshare
