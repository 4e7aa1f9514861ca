#include "specshare/single_channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specshare {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kStationaryResidual = 1e-12;
constexpr int kThresholdCap = 100'000;

}  // namespace

double average_reward(const ChannelParams& params, int threshold, double cost) {
  if (threshold < 1) throw std::invalid_argument("average_reward requires threshold >= 1");
  const double p_h = flip_prob(params, threshold);
  const double q = params.q();
  return (p_h - (p_h + q) * cost) / (p_h + threshold * q);
}

int threshold_search_limit(const ChannelParams& params) {
  const double h = std::ceil(std::log(kStationaryResidual) / std::log(params.contraction()));
  return static_cast<int>(std::clamp(h, 1.0, static_cast<double>(kThresholdCap)));
}

ThresholdPolicyEval evaluate_optimal(const ChannelParams& params, double cost) {
  const int limit = threshold_search_limit(params);
  const double q = params.q();
  const double r = params.contraction();

  // Iterated product for (1-2q)^H keeps the scan linear without pow().
  double r_pow = 1.0;
  double best_gain = -std::numeric_limits<double>::infinity();
  int best_h = 1;
  for (int h = 1; h <= limit; ++h) {
    r_pow *= r;
    const double p_h = h == 1 ? q : 0.5 * (1.0 - r_pow);
    const double gain = (p_h - (p_h + q) * cost) / (p_h + h * q);
    if (gain > best_gain + kTieTolerance) {
      best_gain = gain;
      best_h = h;
    }
  }
  if (best_gain <= 0.0) return {Threshold::never(), cost, 0.0};
  return {Threshold::at(best_h), cost, best_gain};
}

Threshold optimal_threshold(const ChannelParams& params, double cost) {
  return evaluate_optimal(params, cost).threshold;
}

double relative_value_free(const ChannelParams& params, double cost, double gain) {
  const double q = params.q();
  return ((1.0 - q) - cost - gain) / q;
}

double g_certificate(const ChannelParams& params, int threshold, double relative_value_s) {
  if (threshold < 1) throw std::invalid_argument("g_certificate requires threshold >= 1");
  if (!(relative_value_s > -1.0)) {
    throw std::invalid_argument("g_certificate requires S(0,1) > -1");
  }
  return flip_prob_increment(params, threshold + 1) * (relative_value_s + 1.0);
}

Threshold DpSolution::threshold() const {
  for (int age = 1; age <= delta_max(); ++age) {
    if (transmits(Occupancy::Occupied, age)) return Threshold::at(age);
  }
  return Threshold::never();
}

bool DpSolution::is_threshold_type() const {
  for (Eigen::Index i = 1; i < action.rows(); ++i) {
    if (action(i, 1) < action(i - 1, 1)) return false;
  }
  return true;
}

DpSolution solve_dp(const ChannelParams& params, double cost, int delta_max, double tolerance,
                    int max_sweeps) {
  if (delta_max < 10) throw std::invalid_argument("solve_dp requires delta_max >= 10");
  if (!(tolerance > 0.0)) throw std::invalid_argument("solve_dp requires tolerance > 0");

  constexpr int kFree = 0;
  constexpr int kOccupied = 1;
  const Eigen::Index rows = delta_max;

  // Probability that the channel is free now, per (age, last observation).
  Eigen::ArrayX2d free_prob(rows, 2);
  for (int age = 1; age <= delta_max; ++age) {
    const double p = flip_prob(params, age);
    free_prob(age - 1, kFree) = 1.0 - p;
    free_prob(age - 1, kOccupied) = p;
  }

  Eigen::ArrayX2d h = Eigen::ArrayX2d::Zero(rows, 2);
  Eigen::ArrayX2d next(rows, 2);
  Eigen::ArrayX2d wait_value(rows, 2);
  Eigen::ArrayX2d transmit_value(rows, 2);

  DpSolution solution;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const double after_success = 1.0 + h(0, kFree);
    const double after_collision = h(0, kOccupied);

    wait_value.topRows(rows - 1) = h.bottomRows(rows - 1);
    wait_value.row(rows - 1) = h.row(rows - 1);  // age saturates at delta_max
    transmit_value = free_prob * after_success + (1.0 - free_prob) * after_collision - cost;
    next = wait_value.max(transmit_value);

    const Eigen::ArrayX2d diff = next - h;
    const double lo = diff.minCoeff();
    const double hi = diff.maxCoeff();

    h = next - next(0, kOccupied);
    if (hi - lo < tolerance) {
      solution.gain = 0.5 * (lo + hi);
      solution.iterations = sweep;
      break;
    }
    if (sweep == max_sweeps) {
      throw DpNotConverged("relative value iteration did not converge within " +
                           std::to_string(max_sweeps) + " sweeps");
    }
  }

  // Final greedy policy against the converged values.
  wait_value.topRows(rows - 1) = h.bottomRows(rows - 1);
  wait_value.row(rows - 1) = h.row(rows - 1);
  transmit_value = free_prob * (1.0 + h(0, kFree)) + (1.0 - free_prob) * h(0, kOccupied) - cost;

  const double tie_margin = 10.0 * tolerance;
  solution.value = h;
  solution.action = (transmit_value > wait_value + tie_margin).cast<std::uint8_t>();
  return solution;
}

}  // namespace specshare
