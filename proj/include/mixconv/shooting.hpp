#pragma once

// Critical shooting values by bracketed bisection on classifier predicates.
//   c_star : boundary of the blow-up set; its trajectory has f' -> 0.
//   c_upper: boundary of the globally concave (b > 1) or globally convex
//            (b < 1) set.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixconv/classifier.hpp"
#include "mixconv/ode_core.hpp"

namespace mixconv {

enum class CriticalKind { CStar, CUpper };

std::string_view to_string(CriticalKind kind);

struct CriticalValue {
  CriticalKind which = CriticalKind::CStar;
  double value = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double tol = 0.0;
  int iterations = 0;
  std::string predicate;
  // Probe integrations that had to be repeated with a longer horizon.
  int retries = 0;
};

/// -a b - sqrt((2b + a^2)(beta + d) d) with d = max(b, 3/2): every c whose
/// trajectory keeps f' > 0 lies above this value.
double lower_bound_c_star(const ProblemParams& params);

/// Controls used for shots at or near a critical value: rtol tightened to
/// 1e-12 (atol to 1e-13).
IntegratorControls near_critical_controls(const IntegratorControls& controls);

/// Bisection on predicate_fp_hits_zero over [lower_bound_c_star - 1, 0].
/// Requires b > 0 and (beta <= 1 or b <= beta / (beta - 1)).
/// Throws Error(Precondition) / Error(BracketFailure).
CriticalValue find_c_star(const ProblemParams& params, const IntegratorControls& controls, double tol = 1e-10);

/// b > 1: bisection on predicate_fp_below_one over [c_star, -a (b - 1)].
/// b = 1: exactly 0. b < 1: bisection on predicate_fp_above_one over
/// [a (1 - b), H], H pushed out geometrically until f' crosses 1.
/// Requires beta <= 1.
CriticalValue find_c_upper(const ProblemParams& params, const IntegratorControls& controls, double tol = 1e-10);

/// Trajectory at a computed critical value, integrated with
/// near_critical_controls.
Trajectory critical_trajectory(const ProblemParams& params, const CriticalValue& critical,
                               const IntegratorControls& controls);

/// 2 a c >= b^2 - (2 b - beta) a^2, i.e. K(0) >= 0. Requires beta in (1, 2] and a > 0.
bool sufficient_condition_limit_one(const ProblemParams& params, double c);

struct SweepEntry {
  double c = 0.0;
  std::optional<RegimeLabel> label;
  std::optional<Termination> termination;
  std::string error;
};

/// Independent integrate + classify per grid value; order preserved.
/// jobs = 0 uses the hardware concurrency. Errors are recorded per entry.
std::vector<SweepEntry> sweep(const ProblemParams& params, std::span<const double> c_grid,
                              const IntegratorControls& controls, unsigned jobs = 0);

}  // namespace mixconv
