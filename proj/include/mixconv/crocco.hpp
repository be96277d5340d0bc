#pragma once

// Crocco-type variables on a concave stretch of a trajectory: y = f'^2,
// v(y) = f, v'(y) = 1 / (2 f''). There v solves
//   v'' = v v'^2 / sqrt(y) + 2 beta (sqrt(y) - 1) v'^3.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

#include "mixconv/ode_core.hpp"

namespace mixconv {

struct CroccoProfile {
  ProblemParams params;
  // Strictly increasing; the last entry is b^2.
  std::vector<double> y;
  std::vector<double> v;
  std::vector<double> vp;
};

/// Profile of the samples with t <= t_hi. Throws Error(NotMonotone) if
/// f' <= 0 or f'' >= 0 anywhere on that stretch, or if fewer than 5 samples
/// remain.
CroccoProfile to_crocco(const Trajectory& traj, double t_hi = std::numeric_limits<double>::infinity());

/// The part of the profile with y >= y_min.
CroccoProfile restrict(const CroccoProfile& profile, double y_min);

/// sup |v'' - rhs| / (1 + |rhs|), with v'' differenced from the v' samples.
/// Throws Error(Domain) if some sample has y < y_min.
double crocco_residual(const CroccoProfile& profile, double y_min = 1e-6);

/// n uniformly spaced points covering the y-range shared by both profiles,
/// ending exactly at b^2. Throws Error(GridMismatch) for different params.
std::vector<double> common_grid(const CroccoProfile& p1, const CroccoProfile& p2, std::size_t n);

/// Monotone cubic (pchip) interpolation of v and v' onto `grid`, which must
/// lie inside the profile's y-range (Error(Domain) otherwise).
CroccoProfile resample(const CroccoProfile& profile, const std::vector<double>& grid);

struct OrderingReport {
  // w' = v1' - v2' < 0 at every grid point.
  bool w_sign_ok = false;
  // W(b^2) = 1/v1'(b^2) - 1/v2'(b^2) = 2 (c1 - c2).
  double W_endpoint = 0.0;
  double w_sup = 0.0;
};

/// Throws Error(GridMismatch) unless both profiles share params and y grid.
OrderingReport ordering_check(const CroccoProfile& p1, const CroccoProfile& p2);

/// CSV with header `y,v,vp`.
void write_csv(std::ostream& os, const CroccoProfile& profile);

}  // namespace mixconv
