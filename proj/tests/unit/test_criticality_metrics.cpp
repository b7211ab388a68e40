#include <gtest/gtest.h>

#include <random>

#include "scenkit/criticality_metrics.hpp"
#include "scenkit/error.hpp"
#include "test_util.hpp"

using namespace scenkit;
using scenkit::testing::state_at;
using scenkit::testing::three_lane_road;

TEST(Ttc, Examples) {
  const Road road = three_lane_road();
  const auto rear = state_at(road, 1, 1, 0.0, 30.0);
  EXPECT_DOUBLE_EQ(ttc(rear, state_at(road, 2, 1, 50.0 + 4.5, 20.0)), 5.0);
  EXPECT_DOUBLE_EQ(ttc(rear, state_at(road, 2, 1, 50.0 + 4.5, 35.0)), 10.0);
  EXPECT_DOUBLE_EQ(ttc(rear, state_at(road, 2, 1, 4.5, 20.0)), 0.0);
  EXPECT_DOUBLE_EQ(ttc(rear, state_at(road, 2, 1, 3.0, 20.0)), 0.0);
  EXPECT_DOUBLE_EQ(ttc(rear, state_at(road, 2, 1, 500.0, 0.0)), 10.0);
  EXPECT_THROW(ttc(rear, state_at(road, 2, 1, -20.0, 20.0)), ArgumentError);
}

TEST(MinTtc, Examples) {
  EXPECT_DOUBLE_EQ(min_ttc(std::vector<double>{10, 10, 4.2, 7}), 4.2);
  EXPECT_DOUBLE_EQ(min_ttc(std::vector<double>{}), 10.0);
  EXPECT_DOUBLE_EQ(min_ttc(std::vector<double>{10, 3, 0}), 0.0);
  const auto s = make_ttc_series({9, 12, 6});
  EXPECT_DOUBLE_EQ(s.min_ttc, 6.0);
  for (double v : s.values) EXPECT_LE(v, 10.0);
}

TEST(IsCritical, StrictlyBelowThreshold) {
  EXPECT_TRUE(is_critical(1.4));
  EXPECT_FALSE(is_critical(1.5));
  EXPECT_FALSE(is_critical(10.0));
  EXPECT_TRUE(is_critical(0.0));
  EXPECT_THROW(is_critical(-0.1), ArgumentError);
}

TEST(TtcProperty, MonotoneInGapAndInverseInSpeedScale) {
  const Road road = three_lane_road();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> gap(0.5, 150.0), v(1.0, 40.0), scale(0.2, 3.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const double g = gap(rng);
    const double vf = v(rng);
    const double vr = vf + v(rng) * 0.5;
    const auto rear = state_at(road, 1, 1, 0.0, vr);
    const double t1 = ttc(rear, state_at(road, 2, 1, g + 4.5, vf));
    const double t2 = ttc(rear, state_at(road, 2, 1, g + 10.0 + 4.5, vf));
    EXPECT_LE(t1, t2 + 1e-12);
    EXPECT_GE(t1, 0.0);
    EXPECT_LE(t1, 10.0);
    const double k = scale(rng);
    const double raw = g / (vr - vf);
    const double scaled =
        ttc(state_at(road, 1, 1, 0.0, vr * k), state_at(road, 2, 1, g + 4.5, vf * k));
    EXPECT_NEAR(scaled, std::min(raw / k, 10.0), 1e-9);
  }
}

TEST(MinTtcProperty, BoundsEverySample) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 12.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> series(20);
    for (auto& x : series) x = u(rng);
    const auto s = make_ttc_series(series);
    for (double x : s.values) EXPECT_LE(s.min_ttc, x);
    EXPECT_LE(s.min_ttc, 10.0);
  }
}
