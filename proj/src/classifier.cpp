#include "mixconv/classifier.hpp"

#include <algorithm>
#include <iterator>
#include <optional>
#include <vector>

#include "mixconv/error.hpp"

namespace mixconv {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::C0: return "C0";
    case Family::C1: return "C1";
    case Family::C21ToZero: return "C21_TO_0";
    case Family::C21ToOne: return "C21_TO_1";
    case Family::C22: return "C22";
    case Family::C0P1: return "C0P1";
    case Family::C0P2: return "C0P2";
    case Family::C1P: return "C1P";
    case Family::C2P: return "C2P";
    case Family::Unresolved: return "UNRESOLVED";
  }
  return "UNRESOLVED";
}

std::string_view to_string(Shape shape) {
  switch (shape) {
    case Shape::Concave: return "CONCAVE";
    case Shape::Convex: return "CONVEX";
    case Shape::ConcaveConvex: return "CONCAVE_CONVEX";
    case Shape::ConvexConcave: return "CONVEX_CONCAVE";
    case Shape::Affine: return "AFFINE";
    case Shape::Constant: return "CONSTANT";
    case Shape::None: return "NONE";
  }
  return "NONE";
}

std::string_view to_string(LimitLabel limit) {
  switch (limit) {
    case LimitLabel::Zero: return "ZERO";
    case LimitLabel::One: return "ONE";
    case LimitLabel::Blowup: return "BLOWUP";
    case LimitLabel::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

namespace {

LimitLabel limit_of(const Termination& term) {
  switch (term.kind) {
    case TerminationKind::Limit: return term.limit == 0 ? LimitLabel::Zero : LimitLabel::One;
    case TerminationKind::Blowup: return LimitLabel::Blowup;
    default: return LimitLabel::Unknown;
  }
}

bool has(const Trajectory& traj, EventKind kind) {
  return std::any_of(traj.events.begin(), traj.events.end(), [kind](const Event& e) { return e.kind == kind; });
}

std::optional<double> first_time(const Trajectory& traj, EventKind kind) {
  for (const auto& e : traj.events) {
    if (e.kind == kind) return e.t;
  }
  return std::nullopt;
}

std::vector<const Event*> curvature_zeros(const Trajectory& traj) {
  std::vector<const Event*> out;
  for (const auto& e : traj.events) {
    if (e.kind == EventKind::FppZeroNegToPos || e.kind == EventKind::FppZeroPosToNeg) out.push_back(&e);
  }
  return out;
}

RegimeLabel classify_upper_branch(const Trajectory& traj, LimitLabel limit) {
  const double c = traj.c;
  const auto zeros = curvature_zeros(traj);
  const bool hits_zero = predicate_fp_hits_zero(traj);
  const auto down = first_time(traj, EventKind::FpOneDown);
  const bool blowup = traj.termination.kind == TerminationKind::Blowup;

  if (c > 0.0) {
    if (!hits_zero && !down && limit == LimitLabel::One && zeros.size() == 1 &&
        zeros[0]->kind == EventKind::FppZeroPosToNeg) {
      return {Family::C0, Shape::ConvexConcave, limit};
    }
    return {Family::Unresolved, Shape::None, limit};
  }
  if (hits_zero) {
    if (blowup) return {Family::C22, zeros.empty() ? Shape::Concave : Shape::None, limit};
    return {Family::Unresolved, Shape::None, limit};
  }
  if (!down && zeros.empty() && limit == LimitLabel::One) return {Family::C1, Shape::Concave, limit};
  if (down && zeros.empty() && limit == LimitLabel::Zero) return {Family::C21ToZero, Shape::Concave, limit};
  if (down && zeros.size() == 1 && limit == LimitLabel::One) {
    const Event& z = *zeros[0];
    if (z.kind == EventKind::FppZeroNegToPos && z.t >= *down && z.state.fp > 0.0 && z.state.fp < 1.0) {
      return {Family::C21ToOne, Shape::ConcaveConvex, limit};
    }
  }
  return {Family::Unresolved, Shape::None, limit};
}

RegimeLabel classify_lower_branch(const Trajectory& traj, LimitLabel limit) {
  const double c = traj.c;
  const auto zeros = curvature_zeros(traj);
  const bool hits_zero = predicate_fp_hits_zero(traj);
  const bool blowup = traj.termination.kind == TerminationKind::Blowup;

  if (c < 0.0) {
    if (hits_zero) {
      if (blowup) return {Family::C0P2, zeros.empty() ? Shape::Concave : Shape::None, limit};
      return {Family::Unresolved, Shape::None, limit};
    }
    if (zeros.empty() && limit == LimitLabel::Zero) return {Family::C0P1, Shape::Concave, limit};
    if (zeros.size() == 1 && limit == LimitLabel::One) {
      const Event& z = *zeros[0];
      if (z.kind == EventKind::FppZeroNegToPos && z.state.fp > 0.0 && z.state.fp < 1.0) {
        return {Family::C0P1, Shape::ConcaveConvex, limit};
      }
    }
    return {Family::Unresolved, Shape::None, limit};
  }
  const auto up = first_time(traj, EventKind::FpOneUp);
  if (hits_zero) return {Family::Unresolved, Shape::None, limit};
  if (!up && zeros.empty() && limit == LimitLabel::One) return {Family::C1P, Shape::Convex, limit};
  if (up && zeros.size() == 1 && limit == LimitLabel::One) {
    const Event& z = *zeros[0];
    if (z.kind == EventKind::FppZeroPosToNeg && z.t >= *up && z.state.fp > 1.0) {
      return {Family::C2P, Shape::ConvexConcave, limit};
    }
  }
  return {Family::Unresolved, Shape::None, limit};
}

}  // namespace

RegimeLabel classify(const Trajectory& traj) {
  const LimitLabel limit = limit_of(traj.termination);
  if (traj.exact) {
    if (traj.params.b == 0.0) return {Family::C1P, Shape::Constant, LimitLabel::Zero};
    return {Family::C1, Shape::Affine, LimitLabel::One};
  }
  const Termination& term = traj.termination;
  if (term.basis == LimitBasis::Dwell && term.limit == 0) {
    // Sign changes inside the confirming window happen at |f'|, |f''| below
    // limit_eps and carry no information beyond the limit itself.
    Trajectory head;
    head.params = traj.params;
    head.c = traj.c;
    head.termination = term;
    std::copy_if(traj.events.begin(), traj.events.end(), std::back_inserter(head.events),
                 [&](const Event& e) { return e.t < term.dwell_from; });
    return head.params.b >= 1.0 ? classify_upper_branch(head, limit) : classify_lower_branch(head, limit);
  }
  return traj.params.b >= 1.0 ? classify_upper_branch(traj, limit) : classify_lower_branch(traj, limit);
}

RegimeLabel classify(const Trajectory& traj, const ProblemParams& params) {
  const auto& p = traj.params;
  if (p.beta != params.beta || p.a != params.a || p.b != params.b) {
    throw Error(ErrorCode::ParamMismatch, "trajectory was integrated for different (beta, a, b)");
  }
  return classify(traj);
}

bool predicate_fp_hits_zero(const Trajectory& traj) {
  if (has(traj, EventKind::FpZero)) return true;
  return traj.termination.kind == TerminationKind::Blowup && traj.final_state().fp < 0.0;
}

bool predicate_fp_below_one(const Trajectory& traj) {
  if (traj.params.b < 1.0) throw Error(ErrorCode::WrongBranch, "predicate_fp_below_one needs b >= 1");
  return has(traj, EventKind::FpOneDown);
}

bool predicate_fp_above_one(const Trajectory& traj) {
  if (traj.params.b >= 1.0) throw Error(ErrorCode::WrongBranch, "predicate_fp_above_one needs b < 1");
  return has(traj, EventKind::FpOneUp);
}

}  // namespace mixconv
