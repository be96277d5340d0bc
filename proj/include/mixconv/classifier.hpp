#pragma once

// Regime labels of a shot, read off the event log and termination verdict of
// an integrated trajectory. Never re-integrates.
//
//   b >= 1:  C0  (c > 0, convex-concave, f' -> 1)
//            C1  (c <= 0, concave, f' -> 1 without going below 1)
//            C21_TO_0 / C21_TO_1 (f' drops below 1, stays positive)
//            C22 (f' reaches 0, then finite-time blow-up)
//   b < 1:   C0P1 / C0P2 (c < 0, f' stays positive / reaches 0)
//            C1P (c >= 0, convex) and C2P (c >= 0, convex-concave)

#include <string_view>

#include "mixconv/ode_core.hpp"

namespace mixconv {

enum class Family { C0, C1, C21ToZero, C21ToOne, C22, C0P1, C0P2, C1P, C2P, Unresolved };
enum class Shape { Concave, Convex, ConcaveConvex, ConvexConcave, Affine, Constant, None };
enum class LimitLabel { Zero, One, Blowup, Unknown };

std::string_view to_string(Family family);
std::string_view to_string(Shape shape);
std::string_view to_string(LimitLabel limit);

struct RegimeLabel {
  Family family = Family::Unresolved;
  Shape shape = Shape::None;
  LimitLabel limit = LimitLabel::Unknown;

  friend bool operator==(const RegimeLabel&, const RegimeLabel&) = default;
};

RegimeLabel classify(const Trajectory& traj);

/// Same as classify(traj), after checking that the trajectory was integrated
/// for `params` (Error(ParamMismatch) otherwise; lambda is ignored).
RegimeLabel classify(const Trajectory& traj, const ProblemParams& params);

/// f' reaches zero: an FP_ZERO event, or blow-up with f' < 0 at the end.
bool predicate_fp_hits_zero(const Trajectory& traj);

/// f' goes below 1 (an FP_ONE_DOWN event). Error(WrongBranch) when b < 1.
bool predicate_fp_below_one(const Trajectory& traj);

/// f' goes above 1 (an FP_ONE_UP event). Error(WrongBranch) when b >= 1.
bool predicate_fp_above_one(const Trajectory& traj);

}  // namespace mixconv
