#include "mixconv/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mixconv/classifier.hpp"
#include "mixconv/error.hpp"
#include "mixconv/monitors.hpp"

namespace mixconv {

std::string_view to_string(TailModel model) { return model == TailModel::Exp ? "EXP" : "GAUSS"; }

namespace {

struct Window {
  std::vector<double> t;
  std::vector<double> q;
};

// Longest leading run of samples inside the band, once q has entered it.
Window band_window(std::span<const double> t, std::span<const double> q) {
  if (t.size() != q.size()) throw Error(ErrorCode::Domain, "t and q differ in length");
  Window w;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const bool inside = q[i] >= kTailBandLo && q[i] <= kTailBandHi;
    if (inside) {
      w.t.push_back(t[i]);
      w.q.push_back(q[i]);
    } else if (!w.t.empty()) {
      break;
    }
  }
  return w;
}

// Where the local rate -d ln q / dt falls below half its running maximum the
// samples have reached the level of whatever competes with the tail law. The
// window keeps only samples at least 100 times above that level.
void trim_departure(Window& w) {
  if (w.t.size() < 5) return;
  std::vector<double> lq(w.q.size());
  std::transform(w.q.begin(), w.q.end(), lq.begin(), [](double x) { return std::log(x); });
  const std::vector<double> d = differentiate(w.t, lq);
  double best = -d[0];
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double rate = -d[i];
    if (best > 0.0 && rate < 0.5 * best) {
      const double floor = 100.0 * w.q[i];
      std::size_t keep = 0;
      while (keep < i && w.q[keep] >= floor) ++keep;
      w.t.resize(keep);
      w.q.resize(keep);
      return;
    }
    best = std::max(best, rate);
  }
}

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& z) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, mz = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    mz += z[i];
  }
  mx /= n;
  mz /= n;
  double sxx = 0.0, sxz = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxz += (x[i] - mx) * (z[i] - mz);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::WindowTooShort, "window has no spread in t");
  const double slope = sxz / sxx;
  return {slope, mz - slope * mx};
}

void require_length(const Window& w) {
  if (w.t.size() < kMinTailSamples) {
    throw Error(ErrorCode::WindowTooShort, std::to_string(w.t.size()) + " samples in the tail band, need " +
                                               std::to_string(kMinTailSamples));
  }
}

TailFit exp_fit(Window w) {
  trim_departure(w);
  require_length(w);
  std::vector<double> z(w.q.size());
  std::transform(w.q.begin(), w.q.end(), z.begin(), [](double x) { return std::log(x); });
  const Line line = least_squares(w.t, z);
  TailFit fit;
  fit.model = TailModel::Exp;
  fit.l = -line.slope;
  fit.A = std::exp(line.intercept) / fit.l;
  fit.t_lo = w.t.front();
  fit.t_hi = w.t.back();
  fit.points = w.t.size();
  for (std::size_t i = 0; i < w.t.size(); ++i) {
    const double model = std::exp(line.intercept + line.slope * w.t[i]);
    fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(w.q[i] / model - 1.0));
  }
  return fit;
}

TailFit gauss_fit(Window w, double beta) {
  trim_departure(w);
  require_length(w);
  std::vector<double> x(w.t.size()), z(w.t.size());
  for (std::size_t i = 0; i < w.t.size(); ++i) {
    const double t = w.t[i];
    if (!(t > 0.0)) throw Error(ErrorCode::Domain, "Gaussian tail needs t > 0");
    x[i] = -t;
    z[i] = std::log(w.q[i]) + 0.5 * t * t - (beta - 1.0) * std::log(t);
  }
  const Line line = least_squares(x, z);
  TailFit fit;
  fit.model = TailModel::Gauss;
  fit.l = line.slope;
  fit.A = std::exp(line.intercept);
  fit.t_lo = w.t.front();
  fit.t_hi = w.t.back();
  fit.points = w.t.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(std::exp(z[i] - line.intercept - line.slope * x[i]) - 1.0));
  }
  return fit;
}

void columns(const Trajectory& traj, double shift, std::vector<double>& t, std::vector<double>& q) {
  t.reserve(traj.samples.size());
  q.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    t.push_back(s.t);
    q.push_back(s.fp - shift);
  }
}

}  // namespace

TailFit fit_exp_tail(const Trajectory& traj) {
  if (traj.termination.kind != TerminationKind::Limit || traj.termination.limit != 0) {
    throw Error(ErrorCode::WrongClass, "exponential tail needs a trajectory with f' -> 0");
  }
  std::vector<double> t, q;
  columns(traj, 0.0, t, q);
  TailFit fit = exp_fit(band_window(t, q));
  const auto last = std::find_if(traj.samples.begin(), traj.samples.end(),
                                 [&](const ShootState& s) { return s.t >= fit.t_hi; });
  fit.l_direct = last->f;
  fit.accepted = std::abs(fit.l - fit.l_direct) <= 0.02 * std::abs(fit.l_direct);
  return fit;
}

TailFit fit_exp_tail(std::span<const double> t, std::span<const double> fp) {
  TailFit fit = exp_fit(band_window(t, fp));
  fit.accepted = fit.max_rel_residual < 1e-6;
  return fit;
}

TailFit fit_gauss_tail(const Trajectory& traj, const ProblemParams& params) {
  const RegimeLabel label = classify(traj, params);
  if (label.shape != Shape::Concave || label.limit != LimitLabel::One) {
    throw Error(ErrorCode::WrongClass, "Gaussian tail needs a concave trajectory with f' -> 1");
  }
  std::vector<double> t, q;
  columns(traj, 1.0, t, q);
  TailFit fit = gauss_fit(band_window(t, q), params.beta);
  fit.accepted = fit.max_rel_residual < 0.05;
  return fit;
}

TailFit fit_gauss_tail(std::span<const double> t, std::span<const double> fp_minus_one, double beta) {
  TailFit fit = gauss_fit(band_window(t, fp_minus_one), beta);
  fit.accepted = fit.max_rel_residual < 0.05;
  return fit;
}

ExpConsistency check_exp_consistency(const Trajectory& traj, const TailFit& fit, double tol) {
  if (fit.model != TailModel::Exp) throw Error(ErrorCode::WrongClass, "consistency check applies to EXP fits");
  ExpConsistency out;
  std::size_t used = 0;
  for (const auto& s : traj.samples) {
    if (s.t < fit.t_lo || s.t > fit.t_hi) continue;
    const double e = fit.A * std::exp(-fit.l * s.t);
    out.f_law = std::max(out.f_law, std::abs(s.f - (fit.l - e)) / std::abs(s.f));
    const double fpp_model = fit.l * fit.l * e;
    out.fpp_law = std::max(out.fpp_law, std::abs(s.fpp + fpp_model) / fpp_model);
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::EmptySeries, "no samples on the fit window");
  out.pass = out.f_law <= tol && out.fpp_law <= tol;
  return out;
}

}  // namespace mixconv
