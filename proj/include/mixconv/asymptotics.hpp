#pragma once

// Tail laws of the two special shots:
//   EXP   (f' -> 0):  f' ~ l A exp(-l t), f -> l
//   GAUSS (f' -> 1):  f' - 1 ~ A t^(beta - 1) exp(-t^2/2 - l t)

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>

#include "mixconv/ode_core.hpp"

namespace mixconv {

enum class TailModel { Exp, Gauss };

std::string_view to_string(TailModel model);

struct TailFit {
  TailModel model = TailModel::Exp;
  double A = 0.0;
  double l = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  // max |q_i / q_model(t_i) - 1| over the window, q the decaying quantity.
  double max_rel_residual = 0.0;
  std::size_t points = 0;
  // EXP fits of a trajectory: the observed limit f(t_hi) and the 2% verdict.
  double l_direct = std::numeric_limits<double>::quiet_NaN();
  bool accepted = false;
};

/// Band of the decaying quantity that makes up the fit window.
inline constexpr double kTailBandLo = 1e-12;
inline constexpr double kTailBandHi = 1e-3;
inline constexpr std::size_t kMinTailSamples = 20;

/// Least squares of ln f' against t on the window f' in [1e-12, 1e-3], cut
/// where the local decay rate drops below half its running maximum.
/// Throws Error(WrongClass) unless the trajectory ends in LIMIT(0),
/// Error(WindowTooShort) with fewer than 20 window samples.
TailFit fit_exp_tail(const Trajectory& traj);

/// Same fit on raw samples of f'; l_direct stays NaN and accepted is set
/// when the residual is below 1e-6.
TailFit fit_exp_tail(std::span<const double> t, std::span<const double> fp);

/// Regression of ln(f' - 1) + t^2/2 - (beta - 1) ln t against -t on the
/// window f' - 1 in [1e-12, 1e-3]. Throws Error(WrongClass) unless the
/// trajectory classifies CONCAVE with limit ONE, Error(ParamMismatch) if it
/// was integrated for other params.
TailFit fit_gauss_tail(const Trajectory& traj, const ProblemParams& params);

/// Same regression on raw samples of f' - 1 (t > 0).
TailFit fit_gauss_tail(std::span<const double> t, std::span<const double> fp_minus_one, double beta);

struct ExpConsistency {
  // sup |f - (l - A e^{-lt})| / |f| on the window.
  double f_law = 0.0;
  // sup |f'' + l^2 A e^{-lt}| / (l^2 A e^{-lt}) on the window.
  double fpp_law = 0.0;
  bool pass = false;
};

/// Checks that one (A, l) carries the f, f' and f'' laws; tol is relative.
ExpConsistency check_exp_consistency(const Trajectory& traj, const TailFit& fit, double tol = 0.05);

}  // namespace mixconv
