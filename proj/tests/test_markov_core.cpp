#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "specshare/markov_core.hpp"

using namespace specshare;

TEST(ChannelParams, RejectsValuesOutsideOpenInterval) {
  EXPECT_THROW(ChannelParams(0.0), std::invalid_argument);
  EXPECT_THROW(ChannelParams(0.5), std::invalid_argument);
  EXPECT_THROW(ChannelParams(-0.1), std::invalid_argument);
  EXPECT_THROW(ChannelParams(std::nan("")), std::invalid_argument);
  EXPECT_NO_THROW(ChannelParams(0.25));
  EXPECT_NO_THROW(ChannelParams{kMaxConfigurableQ});
}

TEST(ChannelParams, TransitionMatrixIsSymmetricStochastic) {
  const ChannelParams p(0.3);
  const auto m = p.transition_matrix();
  EXPECT_DOUBLE_EQ(m(0, 0), 0.7);
  EXPECT_DOUBLE_EQ(m(0, 1), 0.3);
  EXPECT_DOUBLE_EQ(m(1, 0), 0.3);
  EXPECT_DOUBLE_EQ(m.row(1).sum(), 1.0);
}

TEST(FlipProb, HandComputedValues) {
  EXPECT_EQ(flip_prob(ChannelParams(0.25), 1), 0.25);
  EXPECT_DOUBLE_EQ(flip_prob(ChannelParams(0.25), 2), 0.375);
  EXPECT_NEAR(flip_prob(ChannelParams(0.1), 500), 0.5, 1e-12);
  EXPECT_THROW(flip_prob(ChannelParams(0.1), 0), std::invalid_argument);
}

TEST(FlipProb, SingleStepIsExactlyQ) {
  for (double q : {0.01, 0.1, 0.123456789, 0.3, 0.49}) EXPECT_EQ(flip_prob(ChannelParams(q), 1), q);
}

TEST(FlipProb, OrZeroConvention) {
  EXPECT_EQ(flip_prob_or_zero(ChannelParams(0.3), 0), 0.0);
  EXPECT_EQ(flip_prob_or_zero(ChannelParams(0.3), 1), 0.3);
  EXPECT_DOUBLE_EQ(flip_prob_or_zero(ChannelParams(0.25), 3), 0.4375);
  EXPECT_THROW(flip_prob_or_zero(ChannelParams(0.3), -1), std::invalid_argument);
}

TEST(FlipProb, MatchesNaiveMatrixPowers) {
  double worst = 0.0;
  for (int k = 0; k <= 12; ++k) {
    const double q = 0.01 + 0.04 * k;
    const ChannelParams params(q);
    const auto table = oracle::flip_table(q, 1000);
    for (int delta = 1; delta <= 1000; ++delta) {
      worst = std::max(worst, std::abs(flip_prob(params, delta) - static_cast<double>(table[delta])));
    }
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(FlipProb, EigenMatrixPowerAgrees) {
  const ChannelParams params(0.17);
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  for (int delta = 1; delta <= 60; ++delta) {
    m = m * params.transition_matrix();
    EXPECT_NEAR(flip_prob(params, delta), m(1, 0), 1e-14) << "delta " << delta;
    EXPECT_NEAR(stay_prob(params, delta), m(0, 0), 1e-14);
  }
}

TEST(FlipProb, IncreasingConcaveAndBounded) {
  for (double q : {0.01, 0.05, 0.2, 0.35, 0.45}) {
    const ChannelParams params(q);
    // Strict comparisons only where the increments are resolvable in double.
    for (int delta = 1; delta <= 200; ++delta) {
      const double a = flip_prob(params, delta);
      const double b = flip_prob(params, delta + 1);
      const double c = flip_prob(params, delta + 2);
      EXPECT_GT(a, 0.0);
      EXPECT_LE(a, 0.5);
      if (flip_prob_increment(params, delta + 1) > 1e-13) {
        EXPECT_GT(b, a) << "q " << q << " delta " << delta;
        EXPECT_LT(c - 2 * b + a, 0.0) << "q " << q << " delta " << delta;
      }
    }
  }
}

TEST(FlipProb, IncrementMatchesDifference) {
  const ChannelParams params(0.2);
  for (int delta = 2; delta < 40; ++delta) {
    EXPECT_NEAR(flip_prob_increment(params, delta), flip_prob(params, delta) - flip_prob(params, delta - 1),
                1e-15);
  }
  EXPECT_EQ(flip_prob_increment(params, 1), 0.2);
}

TEST(FlipProb, LongDoubleInstantiation) {
  const BasicChannelParams<long double> params(0.25L);
  EXPECT_EQ(flip_prob(params, 2), 0.375L);
}

TEST(MarkovStep, EmpiricalFlipFrequency) {
  const ChannelParams params(0.2);
  RandomStream rng(2024);
  Occupancy x = Occupancy::Occupied;
  int flips = 0;
  const int n = 1'000'000;
  for (int t = 0; t < n; ++t) {
    const Occupancy next = step(params, x, rng);
    flips += next != x;
    x = next;
  }
  EXPECT_NEAR(static_cast<double>(flips) / n, 0.2, 0.002);
}

TEST(MarkovStep, ConsumesExactlyOneDraw) {
  RandomStream a(7), b(7);
  (void)step(ChannelParams(0.3), Occupancy::Free, a);
  (void)b.next_u64();
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(MarkovStep, NearZeroQFreezes) {
  const ChannelParams params(1e-12);
  RandomStream rng(5);
  Occupancy x = Occupancy::Occupied;
  for (int t = 0; t < 10000; ++t) x = step(params, x, rng);
  EXPECT_EQ(x, Occupancy::Occupied);
}

TEST(RandomStream, SubstreamsAreDeterministicAndDistinct) {
  const RandomStream root(99);
  RandomStream a = root.substream(1), b = root.substream(1), c = root.substream(2);
  const auto va = a.next_u64();
  EXPECT_EQ(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
}

TEST(RandomStream, UniformIndexCoversRange) {
  RandomStream rng(3);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) ++hits[rng.uniform_index(7)];
  for (int h : hits) EXPECT_NEAR(h, 10000, 400);
}

TEST(RandomStream, GaussianMoments) {
  RandomStream rng(11);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.gaussian();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.015);
}
