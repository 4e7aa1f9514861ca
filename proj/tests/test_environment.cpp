#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "specshare/environment.hpp"

using namespace specshare;

namespace {
std::vector<ChannelParams> uniform_params(std::size_t n, double q) { return std::vector<ChannelParams>(n, ChannelParams(q)); }
}  // namespace

TEST(IndependentWorld, ConstructionChecks) {
  EXPECT_THROW(IndependentWorld(uniform_params(3, 0.2), std::vector<Occupancy>(2)), std::invalid_argument);
  RandomStream rng(1);
  EXPECT_THROW(IndependentWorld(uniform_params(3, 0.2), rng, {QSchedule::ramp(0.1, 0.2, 10)}),
               std::invalid_argument);
}

TEST(IndependentWorld, FrozenWhenQNearZero) {
  const std::vector<Occupancy> start{Occupancy::Free, Occupancy::Occupied, Occupancy::Free};
  IndependentWorld w(uniform_params(3, 1e-15), start);
  RandomStream rng(3);
  for (int t = 0; t < 5000; ++t) w.step(t, rng);
  EXPECT_EQ(w.occupancy(), start);
}

TEST(IndependentWorld, FlipRateOccupancyAndIndependence) {
  const std::size_t n = 4;
  RandomStream init(10), rng(11);
  IndependentWorld w(uniform_params(n, 0.2), init);
  const int slots = 100'000;
  std::vector<int> flips(n, 0), occupied(n, 0);
  std::vector<std::vector<double>> increments(n);
  for (int t = 0; t < slots; ++t) {
    const auto before = w.occupancy();
    w.step(t, rng);
    for (std::size_t i = 0; i < n; ++i) {
      const int d = to_int(w.occupancy(i)) - to_int(before[i]);
      flips[i] += d != 0;
      occupied[i] += to_int(w.occupancy(i));
      increments[i].push_back(d);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_NEAR(flips[i] / double(slots), 0.2, 0.005);
    EXPECT_NEAR(occupied[i] / double(slots), 0.5, 0.01);
  }
  auto corr = [&](const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      sab += (a[k] - ma) * (b[k] - mb);
      saa += (a[k] - ma) * (a[k] - ma);
      sbb += (b[k] - mb) * (b[k] - mb);
    }
    return sab / std::sqrt(saa * sbb);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) EXPECT_NEAR(corr(increments[i], increments[j]), 0.0, 0.02);
}

TEST(IndependentWorld, ReproducibleFromSeed) {
  auto trajectory = [](std::uint64_t seed) {
    RandomStream init(seed), rng(seed + 1);
    IndependentWorld w(uniform_params(8, 0.3), init);
    std::vector<Occupancy> all;
    for (int t = 0; t < 500; ++t) {
      w.step(t, rng);
      all.insert(all.end(), w.occupancy().begin(), w.occupancy().end());
    }
    return all;
  };
  EXPECT_EQ(trajectory(5), trajectory(5));
  EXPECT_NE(trajectory(5), trajectory(6));
}

TEST(QSchedule, PiecewiseLinear) {
  const QSchedule s({{0, 0.1}, {100, 0.3}, {200, 0.2}});
  EXPECT_DOUBLE_EQ(s.at(-5), 0.1);
  EXPECT_DOUBLE_EQ(s.at(50), 0.2);
  EXPECT_DOUBLE_EQ(s.at(100), 0.3);
  EXPECT_DOUBLE_EQ(s.at(150), 0.25);
  EXPECT_DOUBLE_EQ(s.at(500), 0.2);
  EXPECT_THROW(QSchedule({{0, 0.1}, {0, 0.2}}), std::invalid_argument);
  EXPECT_THROW(QSchedule({{0, 0.5}}), std::invalid_argument);
}

TEST(QSchedule, DefaultScheduleSplitsUpAndDown) {
  std::vector<ChannelParams> params;
  for (int i = 0; i < 10; ++i) params.emplace_back(0.1 + 0.035 * i);
  const auto schedule = default_nonstationary_schedule(params, 30'000);
  int up = 0, down = 0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double start = schedule[i].at(0), end = schedule[i].at(30'000);
    EXPECT_DOUBLE_EQ(start, params[i].q());
    if (end > start) ++up;
    if (end < start) ++down;
    for (std::int64_t t = 0; t <= 30'000; t += 1000) {
      EXPECT_GE(schedule[i].at(t), 0.01);
      EXPECT_LE(schedule[i].at(t), 0.49);
    }
  }
  EXPECT_EQ(up, 5);
  EXPECT_EQ(down, 5);
}

TEST(IndependentWorld, ScheduledQIsUsed) {
  std::vector<QSchedule> schedule{QSchedule({{0, 0.01}, {1000, 0.01}, {1001, 0.45}})};
  RandomStream init(1), rng(2);
  IndependentWorld w(uniform_params(1, 0.2), init, schedule);
  EXPECT_TRUE(w.is_scheduled());
  EXPECT_DOUBLE_EQ(w.q_at(0, 0), 0.01);
  EXPECT_DOUBLE_EQ(w.q_at(0, 5000), 0.45);
  int flips = 0;
  for (int t = 2000; t < 12000; ++t) {
    const auto before = w.occupancy(0);
    w.step(t, rng);
    flips += before != w.occupancy(0);
  }
  EXPECT_NEAR(flips / 10000.0, 0.45, 0.02);
}

TEST(BandWorld, OccupancyConvention) {
  BandWorld w(16, 12, 8, 1.0);
  EXPECT_EQ(w.occupied_range(), std::make_pair(3, 14));
  const auto occ = w.occupancy();
  EXPECT_EQ(std::count(occ.begin(), occ.end(), Occupancy::Occupied), 12);
  for (int c : {1, 2, 15, 16}) EXPECT_FALSE(w.is_occupied(c));

  EXPECT_EQ(BandWorld(16, 1, 5, 1.0).occupied_range(), std::make_pair(5, 5));
  EXPECT_EQ(BandWorld(16, 12, 2, 1.0).occupied_range(), std::make_pair(1, 8));
}

TEST(BandWorld, ShiftRoundsAndClamps) {
  BandWorld w(16, 12, 15, 1.0);
  w.shift(0.7);
  EXPECT_EQ(w.center(), 16);
  w.shift(3.0);
  EXPECT_EQ(w.center(), 16);
  w.shift(0.0);
  EXPECT_EQ(w.center(), 16);
  w.shift(-0.5);
  EXPECT_EQ(w.center(), 16);  // 15.5 rounds away from zero
  w.shift(-1.5);
  EXPECT_EQ(w.center(), 15);  // 14.5 -> 15
  w.shift(-40.0);
  EXPECT_EQ(w.center(), 1);
  EXPECT_EQ(round_half_away(-2.5), -3.0);
  EXPECT_EQ(round_half_away(2.5), 3.0);
}

TEST(BandWorld, ContiguousAndCenterInRange) {
  BandWorld w(16, 12, 8, 2.0);
  RandomStream rng(4);
  for (int t = 0; t < 20000; ++t) {
    w.step(rng);
    ASSERT_GE(w.center(), 1);
    ASSERT_LE(w.center(), 16);
    const auto occ = w.occupancy();
    const auto first = std::find(occ.begin(), occ.end(), Occupancy::Occupied);
    const auto last = std::find(first, occ.end(), Occupancy::Free);
    ASSERT_TRUE(std::find(last, occ.end(), Occupancy::Occupied) == occ.end());
    const auto [lo, hi] = w.occupied_range();
    if (lo > 1 - 0 && hi < 16 && hi - lo + 1 == 12) EXPECT_EQ(std::count(occ.begin(), occ.end(), Occupancy::Occupied), 12);
  }
}

TEST(BandWorld, DiscretizedStepSpread) {
  RandomStream rng(8);
  double sum = 0, sq = 0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    BandWorld w(1001, 1, 501, 1.0);
    w.step(rng);
    const double d = w.center() - 501;
    sum += d;
    sq += d * d;
  }
  const double mean = sum / n;
  // E[round(Z)^2] for Z ~ N(0, 1) is about 1.0833; its square root is the step spread.
  EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 1.0408, 0.01);
  EXPECT_NEAR(mean, 0.0, 0.005);
}

TEST(BandWorld, RejectsBadParameters) {
  EXPECT_THROW(BandWorld(16, 17, 8, 1.0), std::invalid_argument);
  EXPECT_THROW(BandWorld(16, 12, 0, 1.0), std::invalid_argument);
  EXPECT_THROW(BandWorld(16, 12, 8, 0.0), std::invalid_argument);
}
