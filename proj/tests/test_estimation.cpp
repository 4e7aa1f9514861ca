#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "specshare/environment.hpp"
#include "specshare/estimation.hpp"

using namespace specshare;

namespace {
constexpr Occupancy F = Occupancy::Free;
constexpr Occupancy O = Occupancy::Occupied;
}  // namespace

TEST(Record, CountsOnlyFreeOrigin) {
  TransitionCounts c;
  c = record(c, F, O);
  EXPECT_EQ(c.n01, 1u);
  c = record(c, F, F);
  EXPECT_EQ(c.n00, 1u);
  const auto before = c;
  EXPECT_EQ(record(c, O, F), before);
  EXPECT_EQ(record(c, O, O), before);
}

TEST(Estimate, Examples) {
  TransitionCounts c;
  c.n01 = 1;
  c.n00 = 3;
  EXPECT_DOUBLE_EQ(estimate(c, 0.3), 0.25);
  EXPECT_EQ(estimate(TransitionCounts{}, 0.3), 0.3);
  EXPECT_EQ(estimate(TransitionCounts{}), kDefaultPriorQ);
}

TEST(Estimate, ClampedStrictlyInsideUnitHalf) {
  TransitionCounts all_stay;
  all_stay.n00 = 500;
  EXPECT_EQ(estimate(all_stay), kMinEstimate);
  TransitionCounts all_flip;
  all_flip.n01 = 500;
  EXPECT_EQ(estimate(all_flip), kMaxEstimate);
  EXPECT_NO_THROW(ChannelParams(estimate(all_stay)));
  EXPECT_NO_THROW(ChannelParams(estimate(all_flip)));
}

TEST(AdvanceWindow, FloorAtBoundary) {
  auto c = TransitionCounts::windowed(4, 0.5);
  for (int slot = 0; slot < 4; ++slot) {
    c = advance_window(c);
    for (int k = 0; k < 7 && slot == 0; ++k) c = record(c, F, O);
  }
  EXPECT_EQ(c.n01, 7u);
  c = advance_window(c);  // first slot of the second window
  EXPECT_EQ(c.n01, 3u);
  c = record(c, F, O);
  EXPECT_EQ(c.n01, 4u);
}

TEST(AdvanceWindow, IdentityForgettingAndNonBoundary) {
  auto ew = TransitionCounts::windowed(3, 1.0);
  auto plain = TransitionCounts::cumulative();
  std::mt19937_64 gen(1);
  std::bernoulli_distribution coin(0.3);
  for (int t = 0; t < 1000; ++t) {
    ew = advance_window(ew);
    plain = advance_window(plain);
    const Occupancy to = coin(gen) ? O : F;
    ew = record(ew, F, to);
    plain = record(plain, F, to);
    EXPECT_EQ(estimate(ew), estimate(plain));
  }

  auto c = TransitionCounts::windowed(10, 0.5);
  c = advance_window(c);
  c = record(c, F, O);
  c = advance_window(c);
  EXPECT_EQ(c.n01, 1u);
}

TEST(AdvanceWindow, RejectsBadParameters) {
  EXPECT_THROW(TransitionCounts::windowed(0, 0.5), std::invalid_argument);
  EXPECT_THROW(TransitionCounts::windowed(10, 0.0), std::invalid_argument);
  EXPECT_THROW(TransitionCounts::windowed(10, 1.5), std::invalid_argument);
}

TEST(Estimate, ConsistentUnderStationaryChain) {
  const double q = 0.2;
  const int n = 10'000;
  const double band = 3.0 * std::sqrt(q * (1 - q) / n);
  int within = 0;
  std::mt19937_64 gen(77);
  std::bernoulli_distribution flip(q);
  for (int trial = 0; trial < 1000; ++trial) {
    TransitionCounts c;
    for (int k = 0; k < n; ++k) c = record(c, F, flip(gen) ? O : F);
    within += std::abs(estimate(c) - q) <= band;
  }
  EXPECT_GE(within, 990);
}

namespace {

// Fully observed channel whose q ramps from 0.1 to 0.4 over 30000 slots.
double tracking_error(TransitionCounts counts, std::uint64_t seed) {
  const auto schedule = QSchedule::ramp(0.1, 0.4, 30'000);
  RandomStream rng(seed);
  Occupancy x = Occupancy::Free;
  double error = 0.0;
  for (std::int64_t t = 0; t < 30'000; ++t) {
    counts = advance_window(counts);
    const Occupancy next = rng.bernoulli(schedule.at(t)) ? flipped(x) : x;
    counts = record(counts, x, next);
    x = next;
    error += std::abs(estimate(counts) - schedule.at(t));
  }
  return error / 30'000;
}

}  // namespace

TEST(Estimate, WindowedTracksRampBetterThanCumulative) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const double ew = tracking_error(TransitionCounts::windowed(1000, 0.5), seed);
    const double mle = tracking_error(TransitionCounts::cumulative(), seed);
    EXPECT_LT(ew, mle) << "seed " << seed;
  }
}
