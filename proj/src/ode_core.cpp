#include "mixconv/ode_core.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "mixconv/error.hpp"

namespace mixconv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidControls: return "INVALID_CONTROLS";
    case ErrorCode::InvalidParams: return "INVALID_PARAMS";
    case ErrorCode::ParamMismatch: return "PARAM_MISMATCH";
    case ErrorCode::WrongBranch: return "WRONG_BRANCH";
    case ErrorCode::BracketFailure: return "BRACKET_FAILURE";
    case ErrorCode::Precondition: return "PRECONDITION";
    case ErrorCode::EmptySeries: return "EMPTY_SERIES";
    case ErrorCode::NotMonotone: return "NOT_MONOTONE";
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::GridMismatch: return "GRID_MISMATCH";
    case ErrorCode::WrongClass: return "WRONG_CLASS";
    case ErrorCode::WindowTooShort: return "WINDOW_TOO_SHORT";
  }
  return "UNKNOWN";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::FpZero: return "FP_ZERO";
    case EventKind::FpOneDown: return "FP_ONE_DOWN";
    case EventKind::FpOneUp: return "FP_ONE_UP";
    case EventKind::FppZeroNegToPos: return "FPP_ZERO_NEG_TO_POS";
    case EventKind::FppZeroPosToNeg: return "FPP_ZERO_POS_TO_NEG";
  }
  return "UNKNOWN";
}

std::string_view to_string(TerminationKind kind) {
  switch (kind) {
    case TerminationKind::Horizon: return "HORIZON";
    case TerminationKind::Blowup: return "BLOWUP";
    case TerminationKind::Limit: return "LIMIT";
    case TerminationKind::Stopped: return "STOPPED";
  }
  return "UNKNOWN";
}

std::string_view to_string(Certificate cert) {
  switch (cert) {
    case Certificate::None: return "NONE";
    case Certificate::ConvexBasin: return "CONVEX_BASIN";
    case Certificate::ConcaveBasin: return "CONCAVE_BASIN";
    case Certificate::NegativeL: return "NEGATIVE_L";
  }
  return "UNKNOWN";
}

void ProblemParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::InvalidParams, "beta must be > 0");
  if (!(a >= 0.0) || !std::isfinite(a)) throw Error(ErrorCode::InvalidParams, "a must be >= 0");
  if (!(b >= 0.0) || !std::isfinite(b)) throw Error(ErrorCode::InvalidParams, "b must be >= 0");
  if (lambda != 0 && lambda != 1) throw Error(ErrorCode::InvalidParams, "lambda must be 0 or 1");
}

bool ShootState::finite() const {
  return std::isfinite(t) && std::isfinite(f) && std::isfinite(fp) && std::isfinite(fpp);
}

void IntegratorControls::validate() const {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(rtol) || !positive(atol) || !positive(t_max) || !positive(blowup_bound) ||
      !positive(h_min) || !positive(limit_eps) || !positive(limit_window) || !positive(sample_dt) ||
      !positive(h_max)) {
    throw Error(ErrorCode::InvalidControls, "all controls must be finite and strictly positive");
  }
  if (rtol < 10.0 * std::numeric_limits<double>::epsilon()) {
    throw Error(ErrorCode::InvalidControls, "rtol must be at least 10 machine epsilons");
  }
  if (sample_dt > t_max || h_max > t_max) {
    throw Error(ErrorCode::InvalidControls, "sample_dt and h_max must not exceed t_max");
  }
  if (h_min >= h_max) throw Error(ErrorCode::InvalidControls, "h_min must be below h_max");
}

StateRate rhs(const ShootState& s, const ProblemParams& p) {
  return {s.fp, s.fpp, -s.f * s.fpp - p.beta * s.fp * (s.fp - 1.0)};
}

Certificate find_certificate(const ShootState& s, double beta) {
  if (beta <= 1.0) {
    const double bound = s.f * (1.0 - s.fp);
    if (s.fp > 0.0 && s.fp < 1.0 && s.fpp >= 0.0 && s.fpp <= bound) return Certificate::ConvexBasin;
    if (s.fp > 1.0 && s.fpp <= 0.0 && s.fpp >= bound) return Certificate::ConcaveBasin;
  }
  if (s.f >= 0.0 && s.fp > 0.0) {
    const double l = 3.0 * s.fpp * s.fpp + beta * (2.0 * s.fp - 3.0) * s.fp * s.fp;
    const double scale = 3.0 * s.fpp * s.fpp + beta * std::abs(2.0 * s.fp - 3.0) * s.fp * s.fp;
    if (l < -1e-12 * (1.0 + scale)) return Certificate::NegativeL;
  }
  return Certificate::None;
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,f,fp,fpp\n";
  for (const auto& s : traj.samples) {
    os << format_double(s.t) << ',' << format_double(s.f) << ',' << format_double(s.fp) << ','
       << format_double(s.fpp) << '\n';
  }
}

namespace {

using Vec = std::array<double, 3>;

// Dormand-Prince 5(4) coefficients and the continuous extension of
// Hairer & Wanner (dopri5 "contd5").
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

Vec eval(const Vec& y, const ProblemParams& p) {
  const StateRate r = rhs({0.0, y[0], y[1], y[2]}, p);
  return {r.df, r.dfp, r.dfpp};
}

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (const auto& [w, k] : terms) {
    for (int i = 0; i < 3; ++i) out[i] += h * w * (*k)[i];
  }
  return out;
}

bool finite(const Vec& y) {
  return std::isfinite(y[0]) && std::isfinite(y[1]) && std::isfinite(y[2]);
}

// Quartic interpolant over one accepted step [t0, t0 + h].
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<Vec, 5> r{};

  ShootState at(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    ShootState s;
    s.t = t;
    double* out[3] = {&s.f, &s.fp, &s.fpp};
    for (int i = 0; i < 3; ++i) {
      *out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
    }
    return s;
  }
};

struct StepResult {
  Vec y1{};
  Vec k7{};
  double err = 0.0;
  DenseStep dense;
};

StepResult dp_step(const ProblemParams& p, double t, const Vec& y, const Vec& k1, double h,
                   const IntegratorControls& ctl) {
  const Vec k2 = eval(axpy(y, h, {{a21, &k1}}), p);
  const Vec k3 = eval(axpy(y, h, {{a31, &k1}, {a32, &k2}}), p);
  const Vec k4 = eval(axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), p);
  const Vec k5 = eval(axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), p);
  const Vec k6 = eval(axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), p);
  StepResult out;
  out.y1 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
  out.k7 = eval(out.y1, p);
  const Vec& k7 = out.k7;

  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double sc = ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(out.y1[i]));
    sum += (e / sc) * (e / sc);
  }
  out.err = std::sqrt(sum / 3.0);

  out.dense.t0 = t;
  out.dense.h = h;
  for (int i = 0; i < 3; ++i) {
    const double ydiff = out.y1[i] - y[i];
    const double bspl = h * k1[i] - ydiff;
    out.dense.r[0][i] = y[i];
    out.dense.r[1][i] = ydiff;
    out.dense.r[2][i] = bspl;
    out.dense.r[3][i] = ydiff - h * k7[i] - bspl;
    out.dense.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
  }
  return out;
}

double initial_step(const ProblemParams& p, const Vec& y0, const Vec& f0, const IntegratorControls& ctl) {
  auto norm = [&](const Vec& v, const Vec& ref) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double sc = ctl.atol + ctl.rtol * std::abs(ref[i]);
      s += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(s / 3.0);
  };
  const double dnf = norm(f0, y0);
  const double dny = norm(y0, y0);
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
  h = std::min(h, ctl.h_max);
  const Vec y1 = axpy(y0, h, {{1.0, &f0}});
  const Vec f1 = eval(y1, p);
  Vec diff{f1[0] - f0[0], f1[1] - f0[1], f1[2] - f0[2]};
  const double der2 = norm(diff, y0) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, ctl.h_max});
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// Tracked sign-change functions: f', f' - 1, f''.
constexpr int kNumMonitors = 3;

double monitor_value(int idx, const ShootState& s) {
  switch (idx) {
    case 0: return s.fp;
    case 1: return s.fp - 1.0;
    default: return s.fpp;
  }
}

EventKind event_kind(int idx, int new_sign) {
  switch (idx) {
    case 0: return EventKind::FpZero;
    case 1: return new_sign > 0 ? EventKind::FpOneUp : EventKind::FpOneDown;
    default: return new_sign > 0 ? EventKind::FppZeroNegToPos : EventKind::FppZeroPosToNeg;
  }
}

constexpr double kRootTol = 1e-10;
constexpr int kRootMaxIter = 80;
constexpr int kEventSubdivisions = 8;

// Bracketed root of one monitor on the dense interpolant: secant steps that
// fall outside the bracket, or stall, are replaced by bisection.
double refine_root(const DenseStep& d, int idx, double lo, double glo, double hi, double ghi) {
  bool last_was_secant_stall = false;
  for (int it = 0; it < kRootMaxIter && hi - lo > kRootTol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (!last_was_secant_stall && glo != ghi) {
      const double sec = hi - ghi * (hi - lo) / (ghi - glo);
      if (sec > lo && sec < hi) mid = sec;
    }
    const double gm = monitor_value(idx, d.at(mid));
    if (gm == 0.0) return mid;
    const double width = hi - lo;
    if (sign_of(gm) == sign_of(glo)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
    last_was_secant_stall = (hi - lo) > 0.5 * width;
  }
  return std::abs(glo) < std::abs(ghi) ? lo : hi;
}

void fill_exact(Trajectory& traj, const IntegratorControls& ctl) {
  const auto& p = traj.params;
  const auto n = static_cast<std::size_t>(std::floor(ctl.t_max / ctl.sample_dt + 1e-9));
  traj.samples.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * ctl.sample_dt;
    traj.samples.push_back({t, p.a + p.b * t, p.b, 0.0});
  }
  if (traj.samples.back().t < ctl.t_max) {
    if (ctl.t_max - traj.samples.back().t < 0.5 * ctl.sample_dt && traj.samples.size() > 1) {
      traj.samples.pop_back();
    }
    traj.samples.push_back({ctl.t_max, p.a + p.b * ctl.t_max, p.b, 0.0});
  }
  traj.exact = true;
  traj.termination = {TerminationKind::Limit, ctl.t_max, p.b == 0.0 ? 0 : 1, LimitBasis::Exact};
}

}  // namespace

Trajectory integrate(const ProblemParams& params, double c, const IntegratorControls& ctl,
                     const StepObserver& observer) {
  params.validate();
  ctl.validate();
  if (!std::isfinite(c)) throw Error(ErrorCode::InvalidParams, "c must be finite");

  Trajectory traj;
  traj.params = params;
  traj.c = c;

  if (c == 0.0 && (params.b == 0.0 || params.b == 1.0)) {
    fill_exact(traj, ctl);
    return traj;
  }

  Vec y{params.a, params.b, c};
  double t = 0.0;
  Vec k1 = eval(y, params);
  traj.samples.push_back({0.0, params.a, params.b, c});
  std::size_t next_sample = 1;

  // Last nonzero sign of each monitor. A monitor starting at exactly zero
  // takes the sign of its first nonvanishing derivative; f' leaving zero
  // downwards and f' leaving one in either direction count as crossings.
  std::array<int, kNumMonitors> last_sign{};
  {
    const ShootState s0 = traj.samples.front();
    const double fppp0 = -params.a * c - params.beta * params.b * (params.b - 1.0);
    const std::array<double, kNumMonitors> g0{s0.fp, s0.fp - 1.0, s0.fpp};
    const std::array<double, kNumMonitors> dg0{c, c, fppp0};
    for (int i = 0; i < kNumMonitors; ++i) {
      if (g0[i] != 0.0) {
        last_sign[i] = sign_of(g0[i]);
        continue;
      }
      last_sign[i] = sign_of(dg0[i]);
      if ((i == 0 && last_sign[i] < 0) || (i == 1 && last_sign[i] != 0)) {
        traj.events.push_back({event_kind(i, last_sign[i]), 0.0, s0});
      }
    }
  }

  traj.certificate = find_certificate(traj.samples.front(), params.beta);
  if (traj.certificate != Certificate::None) traj.certified_at = 0.0;

  double dwell_start[2] = {-1.0, -1.0};
  auto update_dwell = [&](const ShootState& s) -> int {
    for (int lam = 0; lam < 2; ++lam) {
      const bool near = std::abs(s.fp - lam) < ctl.limit_eps && std::abs(s.fpp) < ctl.limit_eps;
      if (!near) {
        dwell_start[lam] = -1.0;
        continue;
      }
      if (dwell_start[lam] < 0.0) dwell_start[lam] = s.t;
      if (s.t - dwell_start[lam] >= ctl.limit_window && (lam == 1 || ctl.stop_on_limit_zero)) return lam;
    }
    return -1;
  };
  update_dwell(traj.samples.front());

  double h = initial_step(params, y, k1, ctl);
  double facold = 1e-4;
  constexpr double kSafe = 0.9, kBeta = 0.04, kExpo = 0.2 - kBeta * 0.75;
  constexpr double kFacMin = 0.2, kFacMax = 10.0;

  auto finish = [&](TerminationKind kind, int limit, LimitBasis basis) {
    traj.termination = {kind, t, limit, basis};
    if (basis == LimitBasis::Dwell) traj.termination.dwell_from = dwell_start[limit];
    const ShootState last{t, y[0], y[1], y[2]};
    if (traj.samples.back().t < t) {
      if (traj.samples.size() > 1 && t - traj.samples.back().t < 0.5 * ctl.sample_dt) traj.samples.pop_back();
      traj.samples.push_back(last);
    }
  };

  while (true) {
    if (t >= ctl.t_max) {
      if (traj.certificate != Certificate::None) {
        finish(TerminationKind::Limit, 1, LimitBasis::Certificate);
      } else {
        finish(TerminationKind::Horizon, -1, LimitBasis::None);
      }
      return traj;
    }
    double step = std::min(h, ctl.h_max);
    bool clipped = false;
    if (t + step >= ctl.t_max) {
      step = ctl.t_max - t;
      clipped = true;
    }

    StepResult r = dp_step(params, t, y, k1, step, ctl);
    if (!finite(r.y1) || !std::isfinite(r.err)) r.err = std::numeric_limits<double>::infinity();

    if (r.err > 1.0) {
      ++traj.rejected_steps;
      const double fac11 = std::isfinite(r.err) ? std::pow(r.err, kExpo) : 1.0 / kFacMin;
      h = step / std::min(1.0 / kFacMin, fac11 / kSafe);
      if (h < ctl.h_min) {
        finish(TerminationKind::Blowup, -1, LimitBasis::None);
        return traj;
      }
      continue;
    }

    // Accepted.
    ++traj.accepted_steps;
    const DenseStep& dense = r.dense;
    const double t1 = clipped ? ctl.t_max : t + step;

    // Uniform samples inside (t, t1].
    while (true) {
      const double ts = static_cast<double>(next_sample) * ctl.sample_dt;
      if (ts > t1 + 1e-12 * ctl.sample_dt || ts > ctl.t_max) break;
      traj.samples.push_back(ts >= t1 ? ShootState{ts, r.y1[0], r.y1[1], r.y1[2]} : dense.at(ts));
      ++next_sample;
    }

    // Sign changes of f', f' - 1, f'' on a subdivision of the step.
    const std::size_t first_new_event = traj.events.size();
    {
      std::array<double, kEventSubdivisions + 1> ts{};
      std::array<ShootState, kEventSubdivisions + 1> ss{};
      for (int j = 0; j <= kEventSubdivisions; ++j) {
        ts[j] = j == kEventSubdivisions ? t1 : t + step * j / kEventSubdivisions;
        ss[j] = j == 0 ? ShootState{t, y[0], y[1], y[2]}
                       : (j == kEventSubdivisions ? ShootState{t1, r.y1[0], r.y1[1], r.y1[2]} : dense.at(ts[j]));
      }
      for (int i = 0; i < kNumMonitors; ++i) {
        double g_prev = monitor_value(i, ss[0]);
        for (int j = 1; j <= kEventSubdivisions; ++j) {
          const double g = monitor_value(i, ss[j]);
          const int sg = sign_of(g);
          if (sg != 0 && last_sign[i] != 0 && sg != last_sign[i]) {
            const double troot = g_prev == 0.0 ? ts[j - 1] : refine_root(dense, i, ts[j - 1], g_prev, ts[j], g);
            traj.events.push_back({event_kind(i, sg), troot, dense.at(troot)});
          }
          if (sg != 0) last_sign[i] = sg;
          g_prev = g;
        }
      }
      std::sort(traj.events.begin() + static_cast<std::ptrdiff_t>(first_new_event), traj.events.end(),
                [](const Event& x, const Event& z) { return x.t < z.t; });
    }

    // Step-size proposal (PI controller).
    const double fac11 = std::pow(std::max(r.err, 1e-300), kExpo);
    double fac = fac11 / std::pow(facold, kBeta);
    fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
    const double h_next = step / fac;
    facold = std::max(r.err, 1e-4);

    t = t1;
    y = r.y1;
    k1 = r.k7;
    h = clipped ? std::max(h, h_next) : h_next;

    const ShootState s{t, y[0], y[1], y[2]};
    if (std::abs(s.fp) > ctl.blowup_bound || std::abs(s.fpp) > ctl.blowup_bound) {
      finish(TerminationKind::Blowup, -1, LimitBasis::None);
      return traj;
    }
    if (traj.certificate == Certificate::None) {
      traj.certificate = find_certificate(s, params.beta);
      if (traj.certificate != Certificate::None) traj.certified_at = t;
    }
    if (const int lam = update_dwell(s); lam >= 0) {
      finish(TerminationKind::Limit, lam, LimitBasis::Dwell);
      return traj;
    }
    if (observer && observer(StepView{s, traj.events, traj.certificate})) {
      finish(TerminationKind::Stopped, -1, LimitBasis::None);
      return traj;
    }
    if (!clipped && h < ctl.h_min) {
      finish(TerminationKind::Blowup, -1, LimitBasis::None);
      return traj;
    }
  }
}

}  // namespace mixconv
