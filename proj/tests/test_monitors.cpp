#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "mixconv/error.hpp"
#include "mixconv/monitors.hpp"

using namespace mixconv;

TEST(Monitors, HExamples) {
  const double a = 0.7, b = 1.3, c = -0.4;
  EXPECT_DOUBLE_EQ(eval_H({0, a, b, c}), c + a * (b - 1));
  EXPECT_DOUBLE_EQ(eval_H({0, 7, 1, 0}), 0.0);
  EXPECT_DOUBLE_EQ(eval_H({0, 2, 0.5, 1}), 0.0);
}

TEST(Monitors, LExamples) {
  EXPECT_DOUBLE_EQ(eval_L({0, 0, 1, 0}, {1, 0, 0, 1}), -1.0);
  for (double beta : {0.5, 2.0}) {
    EXPECT_DOUBLE_EQ(eval_L({0, 3, 0, 0}, {beta, 0, 0, 1}), 0.0);
    EXPECT_DOUBLE_EQ(eval_L({0, 3, 1.5, 0}, {beta, 0, 0, 1}), 0.0);
  }
}

TEST(Monitors, KExamples) {
  const ProblemParams p{1.4, 0.8, 1.1, 1};
  const double c = 0.3;
  EXPECT_DOUBLE_EQ(eval_K({0, p.a, p.b, c}, p), 2 * p.a * c - p.b * p.b + (2 * p.b - p.beta) * p.a * p.a);
  EXPECT_DOUBLE_EQ(eval_K({0, 0, 1, 5}, p), -1.0);
  EXPECT_DOUBLE_EQ(eval_K({0, 1, 0, 0}, {2, 0, 0, 1}), -2.0);
}

TEST(Monitors, RatesMatchChainRule) {
  const ProblemParams p{0.7, 0, 0, 1};
  const ShootState s{0, 0.9, 1.4, -0.3};
  const StateRate r = rhs(s, p);
  const double dH = r.dfpp + r.df * (s.fp - 1) + s.f * r.dfp;
  const double dL = 6 * s.fpp * r.dfpp + p.beta * (2 * r.dfp * s.fp * s.fp + (2 * s.fp - 3) * 2 * s.fp * r.dfp);
  const double dK = 2 * (r.df * s.fpp + s.f * r.dfpp) - 2 * s.fp * r.dfp + 2 * r.dfp * s.f * s.f +
                    (2 * s.fp - p.beta) * 2 * s.f * r.df;
  EXPECT_NEAR(monitor_rate(MonitorName::H, s, p), dH, 1e-14);
  EXPECT_NEAR(monitor_rate(MonitorName::L, s, p), dL, 1e-14);
  EXPECT_NEAR(monitor_rate(MonitorName::K, s, p), dK, 1e-14);
}

TEST(Differentiate, ExactOnQuarticsWithUnevenSpacing) {
  std::vector<double> t, v;
  for (int i = 0; i < 12; ++i) {
    const double x = 0.1 * i + 0.01 * i * i;
    t.push_back(x);
    v.push_back(x * x * x * x - 2 * x + 1);
  }
  const auto d = differentiate(t, v);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(d[i], 4 * t[i] * t[i] * t[i] - 2, 1e-9);
}

TEST(CheckMonotone, ConstantSeriesPassesBothWays) {
  MonitorSeries s{MonitorName::H, {0, 1, 2, 3}, {2, 2, 2, 2}};
  EXPECT_TRUE(check_monotone(s, Direction::NonIncreasing, 0.0).pass);
  EXPECT_TRUE(check_monotone(s, Direction::NonDecreasing, 0.0).pass);
}

TEST(CheckMonotone, ReportsFirstViolationAndHonoursMask) {
  MonitorSeries s{MonitorName::L, {0, 1, 2, 3}, {3, 2, 2.5, 1}};
  const MonotoneVerdict v = check_monotone(s, Direction::NonIncreasing);
  EXPECT_FALSE(v.pass);
  ASSERT_TRUE(v.first_violation);
  EXPECT_EQ(*v.first_violation, 2u);
  const bool mask[] = {true, true, false, true};
  EXPECT_TRUE(check_monotone(s, Direction::NonIncreasing, 1e-8, mask).pass);
}

TEST(CheckMonotone, EmptySeriesThrows) {
  MonitorSeries s{MonitorName::K, {}, {}};
  EXPECT_THROW(check_monotone(s, Direction::NonDecreasing), Error);
}

TEST(CheckMonotone, LNonIncreasingWhileFNonNegative) {
  const Trajectory traj = integrate({1, 0.5, 2, 1}, -1.0, {});
  for (const auto& s : traj.samples) ASSERT_GE(s.f, 0.0);
  EXPECT_TRUE(check_monotone(monitor_series(traj, MonitorName::L), Direction::NonIncreasing).pass);
}

TEST(CheckMonotone, KNonDecreasingBeforeSlopeVanishes) {
  const ProblemParams p{1.5, 1, 1, 1};
  const Trajectory traj = integrate(p, -2.0, {});
  const MonitorSeries k = monitor_series(traj, MonitorName::K);
  const std::size_t n = traj.samples.size();
  std::unique_ptr<bool[]> positive(new bool[n]);
  std::size_t kept = 0;
  bool inside = true;
  for (std::size_t i = 0; i < n; ++i) {
    inside = inside && traj.samples[i].f > 0 && traj.samples[i].fp > 0;
    positive[i] = inside;
    kept += inside;
  }
  ASSERT_GT(kept, 10u);
  EXPECT_TRUE(check_monotone(k, Direction::NonDecreasing, 1e-8, std::span<const bool>(positive.get(), n)).pass);
}

TEST(RateIdentity, AllMonitorsOnSmoothShot) {
  const Trajectory traj = integrate({0.4, 1.2, 0.6, 1}, 0.8, {});
  for (MonitorName m : {MonitorName::H, MonitorName::L, MonitorName::K}) {
    EXPECT_LT(check_rate_identity(traj, m).sup_error, 1e-5);
  }
}
