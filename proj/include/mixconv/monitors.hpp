#pragma once

// Auxiliary functions with signed derivatives along solutions:
//   H = f'' + f (f' - 1),                         H' = (1 - beta) f' (f' - 1)
//   L = 3 f''^2 + beta (2 f' - 3) f'^2,           L' = -6 f f''^2
//   K = 2 f f'' - f'^2 + (2 f' - beta) f^2,       K' = 2 (2 - beta) f f'^2

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mixconv/ode_core.hpp"

namespace mixconv {

enum class MonitorName { H, L, K };

std::string_view to_string(MonitorName name);

double eval_H(const ShootState& s);
double eval_L(const ShootState& s, const ProblemParams& params);
double eval_K(const ShootState& s, const ProblemParams& params);

/// Closed-form time derivative of a monitor along a solution.
double monitor_rate(MonitorName name, const ShootState& s, const ProblemParams& params);

struct MonitorSeries {
  MonitorName name = MonitorName::H;
  std::vector<double> t;
  std::vector<double> values;
};

/// Monitor evaluated on every sample of the trajectory.
MonitorSeries monitor_series(const Trajectory& traj, MonitorName name);

/// d/dt of values sampled at strictly increasing times: derivative of the
/// quartic through five neighbouring samples (centered inside, shifted at
/// the ends), so nonuniform spacing is handled.
std::vector<double> differentiate(std::span<const double> t, std::span<const double> values);

enum class Direction { NonIncreasing, NonDecreasing };

struct MonotoneVerdict {
  bool pass = true;
  std::optional<std::size_t> first_violation;  // index i where pair (i-1, i) fails
};

/// Throws Error(EmptySeries). When `mask` is given, only pairs with both
/// points masked in are compared.
MonotoneVerdict check_monotone(const MonitorSeries& series, Direction direction, double slack = 1e-8,
                               std::span<const bool> mask = {});

struct IdentityCheck {
  double sup_error = 0.0;
  std::size_t worst_index = 0;
  std::size_t points = 0;
};

/// Sup over samples (restricted by `mask` when given) of
/// |numerical derivative - closed-form rate|.
IdentityCheck check_rate_identity(const Trajectory& traj, MonitorName name, std::span<const bool> mask = {});

/// Trajectory CSV with extra columns `H,L,K`.
void write_csv_with_monitors(std::ostream& os, const Trajectory& traj);

}  // namespace mixconv
