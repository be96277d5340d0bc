#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mixconv/crocco.hpp"
#include "mixconv/error.hpp"
#include "mixconv/shooting.hpp"

using namespace mixconv;

namespace {

const ProblemParams kP{1, 0, 2, 0};

const CriticalValue& c_star() {
  static const CriticalValue cs = find_c_star(kP, {});
  return cs;
}

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

TEST(ToCrocco, EndpointsOfCriticalProfile) {
  const CroccoProfile prof = to_crocco(critical_trajectory(kP, c_star(), {}));
  EXPECT_EQ(prof.y.back(), 4.0);
  EXPECT_EQ(prof.v.back(), 0.0);
  EXPECT_EQ(prof.vp.back(), 0.5 / c_star().value);
  for (std::size_t i = 1; i < prof.y.size(); ++i) EXPECT_GT(prof.y[i], prof.y[i - 1]);
  for (double w : prof.vp) EXPECT_LT(w, 0.0);
  EXPECT_GT(prof.y.front(), 0.0);
}

TEST(ToCrocco, RoundTripToCurvature) {
  const Trajectory traj = critical_trajectory(kP, c_star(), {});
  const CroccoProfile prof = to_crocco(traj);
  const std::size_t n = prof.y.size();
  for (std::size_t i = 0; i < n; ++i) {
    const ShootState& s = traj.samples[n - 1 - i];
    EXPECT_NEAR(1.0 / (2.0 * prof.vp[i]), s.fpp, 1e-6 * std::abs(s.fpp));
  }
}

TEST(ToCrocco, RejectsNonConcaveStretches) {
  EXPECT_EQ(code_of([] { to_crocco(integrate({1, 0, 1, 1}, 0.0, {})); }), ErrorCode::NotMonotone);
  EXPECT_EQ(code_of([] { to_crocco(integrate({1, 0, 2, 1}, 0.5, {})); }), ErrorCode::NotMonotone);
}

TEST(Residual, SmallOnCriticalProfile) {
  const CroccoProfile prof = restrict(to_crocco(critical_trajectory(kP, c_star(), {})), 1e-6);
  EXPECT_LT(crocco_residual(prof), 1e-5);
}

TEST(Residual, ShrinksWithTighterTolerance) {
  IntegratorControls loose;
  loose.rtol = 1e-8;
  loose.atol = 1e-10;
  loose.sample_dt = 0.002;
  IntegratorControls tight = loose;
  tight.rtol = 1e-13;
  tight.atol = 1e-15;
  const double r_loose = crocco_residual(restrict(to_crocco(integrate(kP, -1.0, loose), 0.6), 1e-6));
  const double r_tight = crocco_residual(restrict(to_crocco(integrate(kP, -1.0, tight), 0.6), 1e-6));
  EXPECT_LE(r_tight, 2.0 * r_loose);
}

TEST(Residual, DetectsCorruptedSample) {
  CroccoProfile prof = restrict(to_crocco(critical_trajectory(kP, c_star(), {})), 1e-6);
  const double clean = crocco_residual(prof);
  prof.v[prof.v.size() / 2] += 1e-2;
  const double bad = crocco_residual(prof);
  EXPECT_GT(bad, 1e-3);
  EXPECT_GT(bad, clean);
}

TEST(Residual, DomainGuard) {
  const CroccoProfile prof = to_crocco(critical_trajectory(kP, c_star(), {}));
  ASSERT_LT(prof.y.front(), 1e-6);
  EXPECT_EQ(code_of([&] { crocco_residual(prof); }), ErrorCode::Domain);
}

TEST(Ordering, IdenticalProfiles) {
  const CroccoProfile p = to_crocco(integrate(kP, -1.0, {}), 0.5);
  const auto grid = common_grid(p, p, 50);
  const CroccoProfile r = resample(p, grid);
  const OrderingReport rep = ordering_check(r, r);
  EXPECT_EQ(rep.W_endpoint, 0.0);
  EXPECT_EQ(rep.w_sup, 0.0);
}

TEST(Ordering, EndpointIdentityAndSign) {
  const CroccoProfile p1 = to_crocco(integrate(kP, -1.0, {}), 0.5);
  const CroccoProfile p2 = to_crocco(integrate(kP, -1.1, {}), 0.5);
  const auto grid = common_grid(p1, p2, 200);
  EXPECT_EQ(grid.back(), 4.0);
  const OrderingReport rep = ordering_check(resample(p1, grid), resample(p2, grid));
  EXPECT_NEAR(rep.W_endpoint, 0.2, 1e-12);
  EXPECT_TRUE(rep.w_sign_ok);
  const OrderingReport swapped = ordering_check(resample(p2, grid), resample(p1, grid));
  EXPECT_LT(swapped.W_endpoint, 0.0);
}

TEST(Ordering, GridMismatch) {
  const CroccoProfile p1 = to_crocco(integrate(kP, -1.0, {}), 0.5);
  const CroccoProfile p2 = to_crocco(integrate({1, 0.1, 2, 0}, -1.0, {}), 0.5);
  EXPECT_EQ(code_of([&] { ordering_check(p1, p2); }), ErrorCode::GridMismatch);
  const CroccoProfile p3 = to_crocco(integrate(kP, -1.1, {}), 0.5);
  EXPECT_EQ(code_of([&] { ordering_check(p1, p3); }), ErrorCode::GridMismatch);
}

TEST(CroccoCsv, Header) {
  const CroccoProfile p = to_crocco(integrate(kP, -1.0, {}), 0.1);
  std::ostringstream os;
  write_csv(os, p);
  EXPECT_EQ(os.str().substr(0, 7), "y,v,vp\n");
}
