#pragma once

// Reference computations that share no code with the library: classical
// fixed-step RK4 and a bisection for c_star built on it.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using State = std::array<double, 3>;  // f, f', f''

inline State field(const State& y, double beta) {
  return {y[1], y[2], -y[0] * y[2] - beta * y[1] * (y[1] - 1.0)};
}

inline State rk4_step(const State& y, double h, double beta) {
  auto axpy = [](const State& a, double s, const State& b) {
    return State{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
  };
  const State k1 = field(y, beta);
  const State k2 = field(axpy(y, 0.5 * h, k1), beta);
  const State k3 = field(axpy(y, 0.5 * h, k2), beta);
  const State k4 = field(axpy(y, h, k3), beta);
  State out;
  for (int i = 0; i < 3; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

struct Path {
  double h = 0.0;
  std::vector<State> y;  // y[k] at t = k h

  // Cubic Hermite interpolation of f between grid points.
  double f_at(double t, double beta) const {
    const auto k = static_cast<std::size_t>(std::floor(t / h));
    if (k + 1 >= y.size()) return y.back()[0];
    const double s = (t - static_cast<double>(k) * h) / h;
    const double f0 = y[k][0], f1 = y[k + 1][0];
    const double d0 = field(y[k], beta)[0] * h, d1 = field(y[k + 1], beta)[0] * h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * f0 + h10 * d0 + h01 * f1 + h11 * d1;
  }
};

inline Path rk4_path(double beta, double a, double b, double c, double h, double t_end) {
  Path p;
  p.h = h;
  State y{a, b, c};
  p.y.push_back(y);
  const auto n = static_cast<std::size_t>(std::llround(t_end / h));
  for (std::size_t k = 0; k < n; ++k) {
    y = rk4_step(y, h, beta);
    p.y.push_back(y);
    if (!std::isfinite(y[1]) || std::abs(y[1]) > 1e8) break;
  }
  return p;
}

// For beta <= 1: true if f' reaches 0 before f'' becomes positive. A
// positive f'' with 0 < f' < 1 traps the shot away from f' = 0.
inline bool rk4_hits_zero(double beta, double a, double b, double c, double h = 1e-3, double t_end = 60.0) {
  State y{a, b, c};
  for (double t = 0.0; t < t_end; t += h) {
    if (y[1] <= 0.0) return true;
    if (y[2] > 0.0 && y[1] < 1.0) return false;
    y = rk4_step(y, h, beta);
  }
  return false;
}

inline double rk4_c_star(double beta, double a, double b, double lo, double hi, double tol = 1e-9) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (rk4_hits_zero(beta, a, b, mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Uniform doubles in [lo, hi) from a fixed-seed engine.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : gen_(seed) {}
  double operator()(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace oracle
