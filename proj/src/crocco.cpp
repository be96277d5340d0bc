#include "mixconv/crocco.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

// Boost 1.74's pchip calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>

#include "mixconv/error.hpp"
#include "mixconv/monitors.hpp"

namespace mixconv {

CroccoProfile to_crocco(const Trajectory& traj, double t_hi) {
  CroccoProfile out;
  out.params = traj.params;
  for (const auto& s : traj.samples) {
    if (s.t > t_hi) break;
    if (!(s.fp > 0.0) || !(s.fpp < 0.0)) {
      throw Error(ErrorCode::NotMonotone, "f' = " + format_double(s.fp) + ", f'' = " + format_double(s.fpp) +
                                              " at t = " + format_double(s.t));
    }
    out.y.push_back(s.fp * s.fp);
    out.v.push_back(s.f);
    out.vp.push_back(0.5 / s.fpp);
  }
  std::reverse(out.y.begin(), out.y.end());
  std::reverse(out.v.begin(), out.v.end());
  std::reverse(out.vp.begin(), out.vp.end());
  if (out.y.size() < 5) throw Error(ErrorCode::NotMonotone, "concave stretch too short");
  for (std::size_t i = 1; i < out.y.size(); ++i) {
    if (!(out.y[i] > out.y[i - 1])) {
      throw Error(ErrorCode::NotMonotone, "y = f'^2 not strictly monotone near y = " + format_double(out.y[i]));
    }
  }
  return out;
}

CroccoProfile restrict(const CroccoProfile& profile, double y_min) {
  const auto first = std::lower_bound(profile.y.begin(), profile.y.end(), y_min);
  const auto k = static_cast<std::ptrdiff_t>(first - profile.y.begin());
  CroccoProfile out;
  out.params = profile.params;
  out.y.assign(first, profile.y.end());
  out.v.assign(profile.v.begin() + k, profile.v.end());
  out.vp.assign(profile.vp.begin() + k, profile.vp.end());
  return out;
}

double crocco_residual(const CroccoProfile& profile, double y_min) {
  if (profile.y.empty()) throw Error(ErrorCode::EmptySeries, "empty profile");
  if (profile.y.front() < y_min) {
    throw Error(ErrorCode::Domain, "sample at y = " + format_double(profile.y.front()) + " below y_min = " +
                                       format_double(y_min));
  }
  const double beta = profile.params.beta;
  const std::vector<double> vpp = differentiate(profile.y, profile.vp);
  double worst = 0.0;
  for (std::size_t i = 0; i < profile.y.size(); ++i) {
    const double sy = std::sqrt(profile.y[i]);
    const double w = profile.vp[i];
    const double rhs = profile.v[i] * w * w / sy + 2.0 * beta * (sy - 1.0) * w * w * w;
    worst = std::max(worst, std::abs(vpp[i] - rhs) / (1.0 + std::abs(rhs)));
  }
  return worst;
}

namespace {

void require_same_params(const CroccoProfile& p1, const CroccoProfile& p2) {
  if (!(p1.params == p2.params)) throw Error(ErrorCode::GridMismatch, "profiles belong to different problems");
}

}  // namespace

std::vector<double> common_grid(const CroccoProfile& p1, const CroccoProfile& p2, std::size_t n) {
  require_same_params(p1, p2);
  if (p1.y.empty() || p2.y.empty()) throw Error(ErrorCode::EmptySeries, "empty profile");
  if (n < 2) throw Error(ErrorCode::GridMismatch, "grid needs at least 2 points");
  const double lo = std::max(p1.y.front(), p2.y.front());
  const double hi = std::min(p1.y.back(), p2.y.back());
  if (!(lo < hi)) throw Error(ErrorCode::GridMismatch, "profiles do not overlap");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  grid.back() = hi;
  return grid;
}

CroccoProfile resample(const CroccoProfile& profile, const std::vector<double>& grid) {
  if (profile.y.size() < 4) throw Error(ErrorCode::EmptySeries, "pchip needs at least 4 samples");
  if (grid.empty() || grid.front() < profile.y.front() || grid.back() > profile.y.back()) {
    throw Error(ErrorCode::Domain, "grid leaves the profile's y-range");
  }
  using boost::math::interpolators::pchip;
  pchip<std::vector<double>> v_of(std::vector<double>(profile.y), std::vector<double>(profile.v));
  pchip<std::vector<double>> vp_of(std::vector<double>(profile.y), std::vector<double>(profile.vp));
  CroccoProfile out;
  out.params = profile.params;
  out.y = grid;
  out.v.reserve(grid.size());
  out.vp.reserve(grid.size());
  for (const double y : grid) {
    out.v.push_back(v_of(y));
    out.vp.push_back(vp_of(y));
  }
  return out;
}

OrderingReport ordering_check(const CroccoProfile& p1, const CroccoProfile& p2) {
  require_same_params(p1, p2);
  if (p1.y != p2.y) throw Error(ErrorCode::GridMismatch, "profiles are sampled on different y grids");
  if (p1.y.empty()) throw Error(ErrorCode::EmptySeries, "empty profile");
  OrderingReport report;
  report.w_sign_ok = true;
  for (std::size_t i = 0; i < p1.y.size(); ++i) {
    report.w_sup = std::max(report.w_sup, std::abs(p1.v[i] - p2.v[i]));
    if (!(p1.vp[i] - p2.vp[i] < 0.0)) report.w_sign_ok = false;
  }
  report.W_endpoint = 1.0 / p1.vp.back() - 1.0 / p2.vp.back();
  return report;
}

void write_csv(std::ostream& os, const CroccoProfile& profile) {
  os << "y,v,vp\n";
  for (std::size_t i = 0; i < profile.y.size(); ++i) {
    os << format_double(profile.y[i]) << ',' << format_double(profile.v[i]) << ',' << format_double(profile.vp[i])
       << '\n';
  }
}

}  // namespace mixconv
