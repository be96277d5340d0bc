#pragma once

// Initial-value problem for f''' + f f'' + beta f'(f' - 1) = 0 with
// f(0) = a, f'(0) = b, f''(0) = c, integrated as the first-order system
// y = (f, f', f'') by an embedded Dormand-Prince 5(4) pair with dense output.

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mixconv {

/// One instance of the boundary-value problem: equation parameter, wall data
/// and the target limit of f' at infinity (0 or 1).
struct ProblemParams {
  double beta = 1.0;
  double a = 0.0;
  double b = 0.0;
  int lambda = 1;

  /// Throws Error(InvalidParams) unless beta > 0, a >= 0, b >= 0, lambda in {0, 1}.
  void validate() const;

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;
};

struct ShootState {
  double t = 0.0;
  double f = 0.0;
  double fp = 0.0;
  double fpp = 0.0;

  bool finite() const;
};

/// Time derivative of (f, f', f'').
struct StateRate {
  double df = 0.0;
  double dfp = 0.0;
  double dfpp = 0.0;
};

struct IntegratorControls {
  double rtol = 1e-10;
  double atol = 1e-12;
  double t_max = 50.0;
  double blowup_bound = 1e8;
  double h_min = 1e-13;
  double limit_eps = 1e-4;
  double limit_window = 5.0;

  // Resolution of the uniform sample grid and the largest step the
  // controller may take.
  double sample_dt = 0.005;
  double h_max = 0.25;

  // A dwell near f' = 0 ends the integration. Shooting probes switch this off
  // because a slow pass near zero is exactly what they have to resolve.
  bool stop_on_limit_zero = true;

  /// Throws Error(InvalidControls) on a non-positive field, rtol below
  /// 10 machine epsilons, or sample_dt/h_max larger than t_max.
  void validate() const;
};

enum class EventKind {
  FpZero,
  FpOneDown,
  FpOneUp,
  FppZeroNegToPos,
  FppZeroPosToNeg,
};

std::string_view to_string(EventKind kind);

struct Event {
  EventKind kind = EventKind::FpZero;
  double t = 0.0;
  ShootState state;
};

enum class TerminationKind {
  Horizon,
  Blowup,
  Limit,
  // Halted by a StepObserver before any verdict was reached.
  Stopped,
};

/// How a LIMIT verdict was reached.
enum class LimitBasis {
  None,
  // Exact affine or constant solution.
  Exact,
  // |f' - lambda| and |f''| stayed below limit_eps for limit_window.
  Dwell,
  // A forward-invariant region forcing f' -> 1 was entered and the
  // integration then ran to t_max.
  Certificate,
};

/// Forward-invariant regions in which f' -> 1 is guaranteed.
enum class Certificate {
  None,
  // beta <= 1: 0 < f' < 1 and 0 <= f'' <= f (1 - f').
  ConvexBasin,
  // beta <= 1: f' > 1 and f (1 - f') <= f'' <= 0.
  ConcaveBasin,
  // any beta > 0: f >= 0, f' > 0 and 3 f''^2 + beta (2 f' - 3) f'^2 < 0.
  NegativeL,
};

std::string_view to_string(TerminationKind kind);
std::string_view to_string(Certificate cert);

struct Termination {
  TerminationKind kind = TerminationKind::Horizon;
  // Last accepted time; the escape-time estimate when kind == Blowup.
  double t_end = 0.0;
  // Detected limit of f' when kind == Limit.
  int limit = -1;
  LimitBasis basis = LimitBasis::None;
  // Start of the confirming dwell window when basis == Dwell.
  double dwell_from = -1.0;
};

struct Trajectory {
  ProblemParams params;
  double c = 0.0;
  std::vector<ShootState> samples;
  std::vector<Event> events;
  Termination termination;
  Certificate certificate = Certificate::None;
  double certified_at = -1.0;
  // Produced in closed form (c = 0 with b in {0, 1}).
  bool exact = false;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  const ShootState& final_state() const { return samples.back(); }
};

/// Right-hand side of the first-order system.
StateRate rhs(const ShootState& state, const ProblemParams& params);

/// What a StepObserver sees after every accepted step.
struct StepView {
  const ShootState& state;
  std::span<const Event> events;
  Certificate certificate;
};

/// Returning true halts the integration with TerminationKind::Stopped.
using StepObserver = std::function<bool(const StepView&)>;

/// Integrates from (0, a, b, c) until t_max, blow-up, or a detected limit.
/// Throws Error(InvalidControls) / Error(InvalidParams).
Trajectory integrate(const ProblemParams& params, double c, const IntegratorControls& controls,
                     const StepObserver& observer = {});

/// First certificate satisfied by s, or Certificate::None. The two basins are
/// only tested for beta <= 1, where they are invariant.
Certificate find_certificate(const ShootState& s, double beta);

/// Formats with 17 significant digits.
std::string format_double(double x);

/// CSV with header `t,f,fp,fpp`, one row per sample.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace mixconv
