#include "mixconv/monitors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "mixconv/error.hpp"

namespace mixconv {

std::string_view to_string(MonitorName name) {
  switch (name) {
    case MonitorName::H: return "H";
    case MonitorName::L: return "L";
    case MonitorName::K: return "K";
  }
  return "?";
}

double eval_H(const ShootState& s) { return s.fpp + s.f * (s.fp - 1.0); }

double eval_L(const ShootState& s, const ProblemParams& p) {
  return 3.0 * s.fpp * s.fpp + p.beta * (2.0 * s.fp - 3.0) * s.fp * s.fp;
}

double eval_K(const ShootState& s, const ProblemParams& p) {
  return 2.0 * s.f * s.fpp - s.fp * s.fp + (2.0 * s.fp - p.beta) * s.f * s.f;
}

double monitor_rate(MonitorName name, const ShootState& s, const ProblemParams& p) {
  switch (name) {
    case MonitorName::H: return (1.0 - p.beta) * s.fp * (s.fp - 1.0);
    case MonitorName::L: return -6.0 * s.f * s.fpp * s.fpp;
    case MonitorName::K: return 2.0 * (2.0 - p.beta) * s.f * s.fp * s.fp;
  }
  return 0.0;
}

namespace {

double eval(MonitorName name, const ShootState& s, const ProblemParams& p) {
  switch (name) {
    case MonitorName::H: return eval_H(s);
    case MonitorName::L: return eval_L(s, p);
    case MonitorName::K: return eval_K(s, p);
  }
  return 0.0;
}

// Weights w with sum_k w[k] v[k] = p'(x0), p the interpolating polynomial
// through (xs[k], v[k]).
template <std::size_t N>
std::array<double, N> lagrange_first_derivative(double x0, const std::array<double, N>& xs) {
  std::array<double, N> w{};
  for (std::size_t k = 0; k < N; ++k) {
    double sum = 0.0;
    for (std::size_t m = 0; m < N; ++m) {
      if (m == k) continue;
      double prod = 1.0 / (xs[k] - xs[m]);
      for (std::size_t j = 0; j < N; ++j) {
        if (j == k || j == m) continue;
        prod *= (x0 - xs[j]) / (xs[k] - xs[j]);
      }
      sum += prod;
    }
    w[k] = sum;
  }
  return w;
}

}  // namespace

MonitorSeries monitor_series(const Trajectory& traj, MonitorName name) {
  MonitorSeries out;
  out.name = name;
  out.t.reserve(traj.samples.size());
  out.values.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    out.t.push_back(s.t);
    out.values.push_back(eval(name, s, traj.params));
  }
  return out;
}

std::vector<double> differentiate(std::span<const double> t, std::span<const double> v) {
  const std::size_t n = t.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n < 5) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i + 1 < n ? i + 1 : n - 1;
      d[i] = (v[hi] - v[lo]) / (t[hi] - t[lo]);
    }
    return d;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = std::min(i < 2 ? 0 : i - 2, n - 5);
    std::array<double, 5> xs{};
    for (std::size_t k = 0; k < 5; ++k) xs[k] = t[start + k];
    const auto w = lagrange_first_derivative(t[i], xs);
    double acc = 0.0;
    for (std::size_t k = 0; k < 5; ++k) acc += w[k] * v[start + k];
    d[i] = acc;
  }
  return d;
}

MonotoneVerdict check_monotone(const MonitorSeries& series, Direction direction, double slack,
                               std::span<const bool> mask) {
  if (series.values.empty()) throw Error(ErrorCode::EmptySeries, "monitor series has no samples");
  const auto& v = series.values;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!mask.empty() && !(mask[i - 1] && mask[i])) continue;
    const double step = v[i] - v[i - 1];
    const bool bad = direction == Direction::NonIncreasing ? step > slack : step < -slack;
    if (bad) return {false, i};
  }
  return {true, std::nullopt};
}

IdentityCheck check_rate_identity(const Trajectory& traj, MonitorName name, std::span<const bool> mask) {
  const MonitorSeries series = monitor_series(traj, name);
  const std::vector<double> d = differentiate(series.t, series.values);
  IdentityCheck out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!mask.empty() && !mask[i]) continue;
    ++out.points;
    const double err = std::abs(d[i] - monitor_rate(name, traj.samples[i], traj.params));
    if (err > out.sup_error) {
      out.sup_error = err;
      out.worst_index = i;
    }
  }
  return out;
}

void write_csv_with_monitors(std::ostream& os, const Trajectory& traj) {
  os << "t,f,fp,fpp,H,L,K\n";
  for (const auto& s : traj.samples) {
    os << format_double(s.t) << ',' << format_double(s.f) << ',' << format_double(s.fp) << ','
       << format_double(s.fpp) << ',' << format_double(eval_H(s)) << ','
       << format_double(eval_L(s, traj.params)) << ',' << format_double(eval_K(s, traj.params)) << '\n';
  }
}

}  // namespace mixconv
