#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mixconv/asymptotics.hpp"
#include "mixconv/error.hpp"
#include "mixconv/shooting.hpp"

using namespace mixconv;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Precondition;
}

}  // namespace

TEST(ExpTail, SyntheticData) {
  std::vector<double> t, fp;
  for (int i = 0; i < 4000; ++i) {
    t.push_back(0.01 * i);
    fp.push_back(0.8 * 2 * std::exp(-0.8 * t.back()));
  }
  const TailFit fit = fit_exp_tail(t, fp);
  EXPECT_NEAR(fit.l, 0.8, 1e-6);
  EXPECT_NEAR(fit.A, 2.0, 1e-6);
  EXPECT_LT(fit.t_lo, fit.t_hi);
}

TEST(ExpTail, WrongClassAndShortWindow) {
  EXPECT_EQ(code_of([] { fit_exp_tail(integrate({0.5, 3, 1, 1}, 0.0, {})); }), ErrorCode::WrongClass);
  std::vector<double> t{0, 1, 2, 3}, fp{1e-4, 5e-5, 2e-5, 1e-5};
  EXPECT_EQ(code_of([&] { fit_exp_tail(t, fp); }), ErrorCode::WindowTooShort);
}

TEST(ExpTail, CriticalShotDecaysAtLinearisedRate) {
  const ProblemParams p{1, 0, 2, 0};
  const TailFit fit = fit_exp_tail(critical_trajectory(p, find_c_star(p, {}), {}));
  const double l = fit.l_direct;
  EXPECT_GE(fit.points, kMinTailSamples);
  EXPECT_NEAR(fit.l, 0.5 * (l + std::sqrt(l * l + 4.0 * p.beta)), 1e-3);
  EXPECT_GT(fit.A, 0.0);
}

TEST(GaussTail, SyntheticData) {
  std::vector<double> t, q;
  for (int i = 1; i < 1000; ++i) {
    t.push_back(0.01 * i);
    q.push_back(3 * std::pow(t.back(), -0.5) * std::exp(-t.back() * t.back() / 2 - 1.2 * t.back()));
  }
  const TailFit fit = fit_gauss_tail(t, q, 0.5);
  EXPECT_NEAR(fit.l, 1.2, 1e-6);
  EXPECT_NEAR(fit.A, 3.0, 1e-6);
}

TEST(GaussTail, UpperCriticalShotFitsWell) {
  const ProblemParams p{0.5, 1, 2, 1};
  const CriticalValue cu = find_c_upper(p, {});
  const TailFit fit = fit_gauss_tail(critical_trajectory(p, cu, {}), p);
  EXPECT_LT(fit.max_rel_residual, 0.05);
  EXPECT_GT(fit.A, 0.0);
}

TEST(GaussTail, InteriorConcaveShotRejected) {
  const ProblemParams p{0.5, 1, 2, 1};
  CriticalValue half = find_c_upper(p, {});
  half.value /= 2;
  bool rejected = false;
  try {
    rejected = !fit_gauss_tail(critical_trajectory(p, half, {}), p).accepted;
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::WindowTooShort;
  }
  EXPECT_TRUE(rejected);
}

TEST(GaussTail, WrongClass) {
  const ProblemParams p{1, 0, 2, 1};
  EXPECT_EQ(code_of([&] { fit_gauss_tail(integrate(p, 0.5, {}), p); }), ErrorCode::WrongClass);
}

TEST(ExpTail, CriticalShotBoundedBySlopeEnergy) {
  const ProblemParams p{0.6, 0.5, 1.4, 0};
  const Trajectory traj = critical_trajectory(p, find_c_star(p, {}), {});
  double max_f = 0;
  for (const auto& s : traj.samples) max_f = std::max(max_f, s.f);
  EXPECT_LE(max_f, std::sqrt(p.a * p.a + 2 * p.b) + 1e-6);
}
