#include "mixconv/shooting.hpp"

#include <algorithm>
#include <cmath>

#include "mixconv/error.hpp"
#include "mixconv/parallel.hpp"

namespace mixconv {

std::string_view to_string(CriticalKind kind) { return kind == CriticalKind::CStar ? "C_STAR" : "C_UPPER"; }

double lower_bound_c_star(const ProblemParams& p) {
  const double d = std::max(p.b, 1.5);
  return -p.a * p.b - std::sqrt((2.0 * p.b + p.a * p.a) * (p.beta + d) * d);
}

IntegratorControls near_critical_controls(const IntegratorControls& controls) {
  IntegratorControls out = controls;
  out.rtol = std::min(out.rtol, 1e-12);
  out.atol = std::min(out.atol, 1e-13);
  return out;
}

bool sufficient_condition_limit_one(const ProblemParams& p, double c) {
  if (!(p.beta > 1.0 && p.beta <= 2.0) || !(p.a > 0.0)) {
    throw Error(ErrorCode::Precondition, "sufficient condition needs beta in (1, 2] and a > 0");
  }
  return 2.0 * p.a * c >= p.b * p.b - (2.0 * p.b - p.beta) * p.a * p.a;
}

namespace {

enum class Probe { HitsZero, BelowOne, AboveOne };
enum class Outcome { True, False, Unresolved };

constexpr int kMaxRetries = 3;

std::string_view probe_name(Probe probe) {
  switch (probe) {
    case Probe::HitsZero: return "fp_hits_zero";
    case Probe::BelowOne: return "fp_below_one";
    case Probe::AboveOne: return "fp_above_one";
  }
  return "";
}

bool has_event(std::span<const Event> events, EventKind kind) {
  return std::any_of(events.begin(), events.end(), [kind](const Event& e) { return e.kind == kind; });
}

// A probe stops as soon as the predicate is settled: the deciding event has
// occurred, or the trajectory has entered a region from which that event can
// no longer happen.
Outcome run_probe(const ProblemParams& params, double c, IntegratorControls ctl, Probe probe) {
  ctl.stop_on_limit_zero = false;
  ctl.limit_eps = std::min(ctl.limit_eps, 1e-9);

  const EventKind deciding = probe == Probe::HitsZero   ? EventKind::FpZero
                             : probe == Probe::BelowOne ? EventKind::FpOneDown
                                                        : EventKind::FpOneUp;
  auto excluded = [probe](Certificate cert) {
    switch (probe) {
      // Every certificate keeps f' > 0 for good.
      case Probe::HitsZero: return cert != Certificate::None;
      case Probe::BelowOne: return cert == Certificate::ConcaveBasin;
      case Probe::AboveOne: return cert == Certificate::ConvexBasin;
    }
    return false;
  };
  auto observer = [&](const StepView& view) {
    return has_event(view.events, deciding) || excluded(view.certificate);
  };

  const Trajectory traj = integrate(params, c, ctl, observer);
  if (has_event(traj.events, deciding)) return Outcome::True;
  if (probe == Probe::HitsZero && predicate_fp_hits_zero(traj)) return Outcome::True;
  if (excluded(traj.certificate)) return Outcome::False;
  if (traj.termination.kind == TerminationKind::Limit && traj.termination.limit == 1) return Outcome::False;
  return Outcome::Unresolved;
}

struct Decided {
  bool value = false;
  int retries = 0;
};

Decided decide(const ProblemParams& params, double c, const IntegratorControls& controls, Probe probe) {
  IntegratorControls ctl = near_critical_controls(controls);
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    const Outcome out = run_probe(params, c, ctl, probe);
    if (out != Outcome::Unresolved) return {out == Outcome::True, attempt};
    ctl.t_max *= 2.0;
  }
  throw Error(ErrorCode::BracketFailure,
              std::string(probe_name(probe)) + " unresolved at c = " + format_double(c) + " after " +
                  std::to_string(kMaxRetries) + " horizon doublings");
}

// Shrinks [lo, hi] around the switch of a monotone predicate.
// `true_below`: the predicate holds at lo and fails at hi; otherwise the reverse.
CriticalValue bisect(const ProblemParams& params, const IntegratorControls& controls, double lo, double hi,
                     double tol, Probe probe, bool true_below, CriticalKind which) {
  CriticalValue cv;
  cv.which = which;
  cv.tol = tol;
  cv.predicate = std::string(probe_name(probe));

  const Decided at_lo = decide(params, lo, controls, probe);
  const Decided at_hi = decide(params, hi, controls, probe);
  cv.retries += at_lo.retries + at_hi.retries;
  if (at_lo.value != true_below || at_hi.value == true_below) {
    throw Error(ErrorCode::BracketFailure, std::string(probe_name(probe)) + " does not switch on [" +
                                               format_double(lo) + ", " + format_double(hi) + "]");
  }
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const Decided d = decide(params, mid, controls, probe);
    cv.retries += d.retries;
    ++cv.iterations;
    if (d.value == true_below) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  cv.bracket_lo = lo;
  cv.bracket_hi = hi;
  // The critical value belongs to the side where the predicate fails.
  cv.value = true_below ? hi : lo;
  return cv;
}

void check_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(ErrorCode::Precondition, "tol must be > 0");
}

}  // namespace

CriticalValue find_c_star(const ProblemParams& params, const IntegratorControls& controls, double tol) {
  params.validate();
  controls.validate();
  check_tol(tol);
  if (!(params.b > 0.0)) throw Error(ErrorCode::Precondition, "c_star needs b > 0");
  if (params.beta > 1.0 && params.b > params.beta / (params.beta - 1.0)) {
    throw Error(ErrorCode::Precondition, "beta > 1 requires b <= beta / (beta - 1)");
  }
  const double lo = lower_bound_c_star(params) - 1.0;
  return bisect(params, controls, lo, 0.0, tol, Probe::HitsZero, true, CriticalKind::CStar);
}

CriticalValue find_c_upper(const ProblemParams& params, const IntegratorControls& controls, double tol) {
  params.validate();
  controls.validate();
  check_tol(tol);
  if (params.beta > 1.0) throw Error(ErrorCode::Precondition, "c_upper needs beta <= 1");

  if (params.b == 1.0) {
    CriticalValue cv;
    cv.which = CriticalKind::CUpper;
    cv.tol = tol;
    cv.predicate = "exact";
    return cv;
  }
  if (params.b > 1.0) {
    const CriticalValue cs = find_c_star(params, controls, tol);
    const double hi = params.a == 0.0 ? 0.0 : -params.a * (params.b - 1.0);
    CriticalValue cv = bisect(params, controls, cs.value, hi, tol, Probe::BelowOne, true, CriticalKind::CUpper);
    cv.retries += cs.retries;
    return cv;
  }

  const double lo = params.a * (1.0 - params.b);
  double step = 1.0;
  double hi = lo + step;
  int retries = 0;
  for (int k = 0;; ++k) {
    const Decided d = decide(params, hi, controls, Probe::AboveOne);
    retries += d.retries;
    if (d.value) break;
    if (k >= 60) throw Error(ErrorCode::BracketFailure, "f' never crosses 1 upward on the expanded bracket");
    step *= 2.0;
    hi = lo + step;
  }
  CriticalValue cv = bisect(params, controls, lo, hi, tol, Probe::AboveOne, false, CriticalKind::CUpper);
  cv.retries += retries;
  return cv;
}

Trajectory critical_trajectory(const ProblemParams& params, const CriticalValue& critical,
                               const IntegratorControls& controls) {
  return integrate(params, critical.value, near_critical_controls(controls));
}

std::vector<SweepEntry> sweep(const ProblemParams& params, std::span<const double> c_grid,
                              const IntegratorControls& controls, unsigned jobs) {
  std::vector<SweepEntry> out(c_grid.size());
  parallel_for(c_grid.size(), jobs, [&](std::size_t i) {
    SweepEntry& entry = out[i];
    entry.c = c_grid[i];
    try {
      const Trajectory traj = integrate(params, c_grid[i], controls);
      entry.label = classify(traj);
      entry.termination = traj.termination;
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
  });
  return out;
}

}  // namespace mixconv
