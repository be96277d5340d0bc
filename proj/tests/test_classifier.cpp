#include <gtest/gtest.h>

#include "mixconv/classifier.hpp"
#include "mixconv/error.hpp"

using namespace mixconv;

namespace {

RegimeLabel label_of(const ProblemParams& p, double c) { return classify(integrate(p, c, {}), p); }

}  // namespace

TEST(Classify, PositiveCurvatureIsConvexConcave) {
  EXPECT_EQ(label_of({1, 0, 2, 1}, 0.5), (RegimeLabel{Family::C0, Shape::ConvexConcave, LimitLabel::One}));
}

TEST(Classify, CornerOfConcaveIntervalIsConcave) {
  EXPECT_EQ(label_of({1, 2, 3, 1}, -4.0), (RegimeLabel{Family::C1, Shape::Concave, LimitLabel::One}));
}

TEST(Classify, AffineStart) {
  EXPECT_EQ(label_of({0.5, 3, 1, 1}, 0.0), (RegimeLabel{Family::C1, Shape::Affine, LimitLabel::One}));
}

TEST(Classify, ConstantStart) {
  EXPECT_EQ(label_of({1, 1, 0, 0}, 0.0), (RegimeLabel{Family::C1P, Shape::Constant, LimitLabel::Zero}));
}

TEST(Classify, UpperBranchLadder) {
  const ProblemParams p{1, 0, 2, 1};
  EXPECT_EQ(label_of(p, -10.0).family, Family::C22);
  EXPECT_EQ(label_of(p, -1.0), (RegimeLabel{Family::C21ToOne, Shape::ConcaveConvex, LimitLabel::One}));
  EXPECT_EQ(label_of(p, 0.0), (RegimeLabel{Family::C1, Shape::Concave, LimitLabel::One}));
}

TEST(Classify, LowerBranchLadder) {
  const ProblemParams p{0.5, 1, 0.5, 1};
  EXPECT_EQ(label_of(p, -3.0), (RegimeLabel{Family::C0P2, Shape::Concave, LimitLabel::Blowup}));
  EXPECT_EQ(label_of(p, -0.3), (RegimeLabel{Family::C0P1, Shape::ConcaveConvex, LimitLabel::One}));
  EXPECT_EQ(label_of(p, 0.2), (RegimeLabel{Family::C1P, Shape::Convex, LimitLabel::One}));
  EXPECT_EQ(label_of(p, 2.0), (RegimeLabel{Family::C2P, Shape::ConvexConcave, LimitLabel::One}));
}

TEST(Classify, HorizonWithoutVerdictIsUnresolved) {
  IntegratorControls ctl;
  ctl.t_max = 0.5;
  const Trajectory traj = integrate({1.5, 0, 2, 1}, -1.0, ctl);
  ASSERT_EQ(traj.termination.kind, TerminationKind::Horizon);
  EXPECT_EQ(classify(traj).family, Family::Unresolved);
}

TEST(Classify, ParamMismatch) {
  const Trajectory traj = integrate({1, 0, 2, 1}, 0.5, {});
  try {
    classify(traj, {1, 0, 3, 1});
    FAIL() << "expected PARAM_MISMATCH";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParamMismatch);
  }
}

TEST(Predicates, HitsZero) {
  IntegratorControls ctl;
  ctl.rtol = 1e-12;
  EXPECT_TRUE(predicate_fp_hits_zero(integrate({1, 0, 2, 1}, -10.0, ctl)));
  EXPECT_FALSE(predicate_fp_hits_zero(integrate({1, 0, 1, 1}, 0.0, {})));
  EXPECT_FALSE(predicate_fp_hits_zero(integrate({1, 2, 3, 1}, -4.0, {})));
}

TEST(Predicates, BelowOne) {
  EXPECT_FALSE(predicate_fp_below_one(integrate({1, 2, 3, 1}, -4.0, {})));
  EXPECT_TRUE(predicate_fp_below_one(integrate({1, 0, 2, 1}, -4.5, {})));
  EXPECT_FALSE(predicate_fp_below_one(integrate({1, 0, 1, 1}, 0.0, {})));
  EXPECT_THROW(predicate_fp_below_one(integrate({1, 0, 0.5, 1}, 0.0, {})), Error);
}

TEST(Predicates, AboveOne) {
  EXPECT_TRUE(predicate_fp_above_one(integrate({0.5, 1, 0.5, 1}, 2.0, {})));
  EXPECT_FALSE(predicate_fp_above_one(integrate({0.5, 1, 0.5, 1}, 0.2, {})));
  EXPECT_THROW(predicate_fp_above_one(integrate({1, 0, 2, 1}, 0.0, {})), Error);
}

TEST(Classify, HitsZeroIsMonotoneOnGrid) {
  const ProblemParams p{0.8, 0.5, 1.5, 1};
  bool seen_false = false;
  for (double c = -6.0; c <= 0.0; c += 0.25) {
    const bool hits = predicate_fp_hits_zero(integrate(p, c, {}));
    if (seen_false) {
      EXPECT_FALSE(hits) << "c = " << c;
    }
    seen_false = seen_false || !hits;
  }
  EXPECT_TRUE(seen_false);
}

TEST(Classify, AtMostOneCurvatureZeroForBetaUpToOne) {
  for (double c = -3.0; c <= 3.0; c += 0.5) {
    const Trajectory traj = integrate({0.6, 0.3, 1.8, 1}, c, {});
    int zeros = 0;
    for (const auto& e : traj.events) {
      zeros += e.kind == EventKind::FppZeroNegToPos || e.kind == EventKind::FppZeroPosToNeg;
    }
    EXPECT_LE(zeros, 1) << "c = " << c;
  }
}
