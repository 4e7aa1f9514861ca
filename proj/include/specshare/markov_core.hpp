#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "specshare/random.hpp"

namespace specshare {

/// PU occupancy of one channel in one slot.
enum class Occupancy : std::uint8_t { Free = 0, Occupied = 1 };

constexpr int to_int(Occupancy x) noexcept { return static_cast<int>(x); }
constexpr Occupancy flipped(Occupancy x) noexcept {
  return x == Occupancy::Free ? Occupancy::Occupied : Occupancy::Free;
}

/**
 * Symmetric two-state occupancy chain with per-slot flip probability q.
 *
 * Only q is stored; every multi-step quantity is derived from the
 * eigenvalue 1 - 2q of the transition matrix. q must lie strictly inside
 * (0, 0.5).
 */
template <typename Scalar>
class BasicChannelParams {
 public:
  using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

  explicit BasicChannelParams(Scalar q) : q_(q) {
    if (!(q > Scalar(0) && q < Scalar(0.5))) {
      throw std::invalid_argument("flip probability must lie in (0, 0.5), got " +
                                  std::to_string(static_cast<double>(q)));
    }
  }

  Scalar q() const noexcept { return q_; }

  /// Second eigenvalue of the transition matrix.
  Scalar contraction() const noexcept { return Scalar(1) - Scalar(2) * q_; }

  Matrix2 transition_matrix() const {
    Matrix2 m;
    m << Scalar(1) - q_, q_, q_, Scalar(1) - q_;
    return m;
  }

  friend bool operator==(const BasicChannelParams&, const BasicChannelParams&) = default;

 private:
  Scalar q_;
};

using ChannelParams = BasicChannelParams<double>;

/// Off-diagonal entry of Q^delta: probability that the occupancy differs
/// from the one observed delta slots ago. delta must be >= 1.
template <typename Scalar>
Scalar flip_prob(const BasicChannelParams<Scalar>& params, int delta) {
  if (delta < 1) throw std::invalid_argument("flip_prob requires delta >= 1");
  if (delta == 1) return params.q();  // exact, so W(1,1) and V(1,1) come out exact
  using std::pow;
  return (Scalar(1) - pow(params.contraction(), delta)) / Scalar(2);
}

/// Same as flip_prob, with the identity-matrix convention [Q^0]_10 = 0.
template <typename Scalar>
Scalar flip_prob_or_zero(const BasicChannelParams<Scalar>& params, int delta) {
  if (delta < 0) throw std::invalid_argument("flip_prob_or_zero requires delta >= 0");
  return delta == 0 ? Scalar(0) : flip_prob(params, delta);
}

/// Diagonal entry of Q^delta.
template <typename Scalar>
Scalar stay_prob(const BasicChannelParams<Scalar>& params, int delta) {
  return Scalar(1) - flip_prob(params, delta);
}

/// [Q^delta]_10 - [Q^(delta-1)]_10 = q (1-2q)^(delta-1), without cancellation.
template <typename Scalar>
Scalar flip_prob_increment(const BasicChannelParams<Scalar>& params, int delta) {
  if (delta < 1) throw std::invalid_argument("flip_prob_increment requires delta >= 1");
  using std::pow;
  return params.q() * pow(params.contraction(), delta - 1);
}

/// One Markov step. Consumes exactly one uniform draw from `rng`.
Occupancy step(const ChannelParams& params, Occupancy current, RandomStream& rng);

/// Clamp used when a configured q sits on the excluded endpoint 0.5.
inline constexpr double kMaxConfigurableQ = 0.5 - 1e-6;

}  // namespace specshare
