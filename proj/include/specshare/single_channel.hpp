#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "specshare/markov_core.hpp"

namespace specshare {

/// Retry threshold H of the single-channel threshold policy, or "never".
class Threshold {
 public:
  static constexpr Threshold never() { return Threshold(); }
  static Threshold at(int h) {
    if (h < 1) throw std::invalid_argument("threshold must be >= 1");
    return Threshold(h);
  }

  constexpr bool is_finite() const noexcept { return value_.has_value(); }
  int value() const { return value_.value(); }

  /// Whether a channel last seen occupied `age` slots ago should be retried.
  constexpr bool admits(int age) const noexcept { return value_ && age >= *value_; }

  friend constexpr bool operator==(const Threshold&, const Threshold&) = default;
  friend constexpr std::strong_ordering operator<=>(const Threshold& a, const Threshold& b) {
    if (a.value_ && b.value_) return *a.value_ <=> *b.value_;
    return a.value_.has_value() ? std::strong_ordering::less
           : b.value_.has_value() ? std::strong_ordering::greater
                                  : std::strong_ordering::equal;
  }

  std::string to_string() const { return value_ ? std::to_string(*value_) : "inf"; }

 private:
  constexpr Threshold() = default;
  constexpr explicit Threshold(int h) : value_(h) {}
  std::optional<int> value_;
};

struct ThresholdPolicyEval {
  Threshold threshold;
  double effective_cost;
  double gain;
};

/// D = (gamma + C) / (1 + gamma). The scheduling gate uses C = 0.
inline double effective_cost(double gamma, double lagrange_cost = 0.0) {
  return (gamma + lagrange_cost) / (1.0 + gamma);
}

/// Time-average reward of the threshold policy with threshold H at cost D.
double average_reward(const ChannelParams& params, int threshold, double cost);

/// Search horizon: smallest H with (1-2q)^H < 1e-12, capped at 1e5.
int threshold_search_limit(const ChannelParams& params);

/// Argmax of average_reward over [1, threshold_search_limit]. Ties (within
/// 1e-12) go to the smaller H. Returns never() when the best gain is <= 0.
Threshold optimal_threshold(const ChannelParams& params, double cost);

/// optimal_threshold together with its gain (0 for never()).
ThresholdPolicyEval evaluate_optimal(const ChannelParams& params, double cost);

/// Differential value S(0,1) implied by the gain, with S(1,1) = 0.
double relative_value_free(const ChannelParams& params, double cost, double gain);

/// g(H) = ([Q^(H+1)]_10 - [Q^H]_10) (S + 1). Requires S > -1.
double g_certificate(const ChannelParams& params, int threshold, double relative_value_s);

/// Raised when relative value iteration exhausts its sweep budget.
class DpNotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Average-reward solution of the single-channel MDP over states
 * (last observation, age) with age in [1, delta_max].
 *
 * Rows index age - 1, columns index the last observation (0 = free,
 * 1 = occupied). Values are differential, normalized to S(1,1) = 0.
 */
struct DpSolution {
  double gain = 0.0;
  Eigen::ArrayX2d value;
  Eigen::Array<std::uint8_t, Eigen::Dynamic, 2> action;
  int iterations = 0;

  int delta_max() const { return static_cast<int>(value.rows()); }
  double value_at(Occupancy last, int age) const { return value(age - 1, to_int(last)); }
  bool transmits(Occupancy last, int age) const { return action(age - 1, to_int(last)) != 0; }

  /// First age at which an occupied-last-seen channel is retried.
  Threshold threshold() const;

  /// Actions for last-seen-occupied are 0...0 1...1 in age.
  bool is_threshold_type() const;
};

/// Relative value iteration. Stops when the span of successive updates is
/// below `tolerance`; throws DpNotConverged after `max_sweeps`.
DpSolution solve_dp(const ChannelParams& params, double cost, int delta_max, double tolerance,
                    int max_sweeps = 2'000'000);

}  // namespace specshare
