#include "mixconv/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include "mixconv/error.hpp"
#include "mixconv/parallel.hpp"

namespace mixconv {

std::string termination_string(const Termination& term) {
  if (term.kind == TerminationKind::Limit) return "LIMIT(" + std::to_string(term.limit) + ")";
  return std::string(to_string(term.kind));
}

Json to_json(const ProblemParams& params) { return {{"beta", params.beta}, {"a", params.a}, {"b", params.b}}; }

Json to_json(const ShootState& s) { return {{"t", s.t}, {"f", s.f}, {"fp", s.fp}, {"fpp", s.fpp}}; }

Json summary_json(const Trajectory& traj) {
  return {{"termination", termination_string(traj.termination)},
          {"events_count", traj.events.size()},
          {"final_state", to_json(traj.final_state())}};
}

Json classification_json(const Trajectory& traj, const RegimeLabel& label) {
  Json events = Json::array();
  for (const auto& e : traj.events) events.push_back({{"kind", to_string(e.kind)}, {"t", e.t}});
  return {{"family", to_string(label.family)},
          {"shape", to_string(label.shape)},
          {"limit", to_string(label.limit)},
          {"events", std::move(events)},
          {"termination", termination_string(traj.termination)}};
}

Json to_json(const CriticalValue& cv) {
  return {{"which", to_string(cv.which)},
          {"value", cv.value},
          {"bracket", {cv.bracket_lo, cv.bracket_hi}},
          {"tol", cv.tol},
          {"iterations", cv.iterations},
          {"predicate", cv.predicate}};
}

Json to_json(const TailFit& fit) {
  return {{"model", to_string(fit.model)},
          {"A", fit.A},
          {"l", fit.l},
          {"window", {fit.t_lo, fit.t_hi}},
          {"residual", fit.max_rel_residual}};
}

Json to_json(const std::vector<SweepEntry>& entries) {
  Json out = Json::array();
  for (const auto& e : entries) {
    if (!e.label) {
      out.push_back({{"c", e.c}, {"error", e.error}});
      continue;
    }
    out.push_back({{"c", e.c},
                   {"family", to_string(e.label->family)},
                   {"shape", to_string(e.label->shape)},
                   {"limit", to_string(e.label->limit)},
                   {"termination", termination_string(*e.termination)}});
  }
  return out;
}

std::string_view to_string(CaseStatus status) {
  switch (status) {
    case CaseStatus::Pass: return "PASS";
    case CaseStatus::Fail: return "FAIL";
    case CaseStatus::Skip: return "SKIP";
  }
  return "UNKNOWN";
}

int VerifyReport::exit_code() const { return count(CaseStatus::Fail) == 0 ? 0 : 5; }

std::size_t VerifyReport::count(CaseStatus status) const {
  return static_cast<std::size_t>(
      std::count_if(cases.begin(), cases.end(), [status](const VerifyCase& c) { return c.status == status; }));
}

Json to_json(const VerifyReport& report) {
  Json cases = Json::array();
  for (const auto& c : report.cases) {
    cases.push_back({{"description", c.description},
                     {"params", to_json(c.params)},
                     {"status", to_string(c.status)},
                     {"details", c.details}});
  }
  return {{"suite", report.suite},
          {"cases", std::move(cases)},
          {"summary",
           {{"pass", report.count(CaseStatus::Pass)},
            {"fail", report.count(CaseStatus::Fail)},
            {"skip", report.count(CaseStatus::Skip)}}},
          {"exit_code", report.exit_code()}};
}

namespace {

struct Shot {
  double c = 0.0;
  RegimeLabel label;
  std::string termination;
  double max_f = 0.0;
  std::size_t fpp_zeros = 0;
  bool hits_zero = false;
  std::string error;
};

std::vector<Shot> run_shots(const ProblemParams& p, const std::vector<double>& cs, const IntegratorControls& ctl,
                            unsigned jobs) {
  std::vector<Shot> out(cs.size());
  parallel_for(cs.size(), jobs, [&](std::size_t i) {
    Shot& s = out[i];
    s.c = cs[i];
    try {
      const Trajectory traj = integrate(p, cs[i], ctl);
      s.label = classify(traj);
      s.termination = termination_string(traj.termination);
      for (const auto& st : traj.samples) s.max_f = std::max(s.max_f, st.f);
      s.fpp_zeros = static_cast<std::size_t>(std::count_if(traj.events.begin(), traj.events.end(), [](const Event& e) {
        return e.kind == EventKind::FppZeroNegToPos || e.kind == EventKind::FppZeroPosToNeg;
      }));
      s.hits_zero = predicate_fp_hits_zero(traj);
    } catch (const std::exception& e) {
      s.error = e.what();
    }
  });
  return out;
}

Json label_json(const RegimeLabel& label) {
  return {{"family", to_string(label.family)}, {"shape", to_string(label.shape)}, {"limit", to_string(label.limit)}};
}

Json shot_json(const Shot& s) {
  if (!s.error.empty()) return {{"c", s.c}, {"error", s.error}};
  Json j = label_json(s.label);
  j["c"] = s.c;
  j["termination"] = s.termination;
  return j;
}

VerifyCase make_case(std::string description, const ProblemParams& p, bool pass, Json details,
                     std::string_view invariant) {
  VerifyCase vc{std::move(description), p, pass ? CaseStatus::Pass : CaseStatus::Fail, std::move(details)};
  if (!pass) vc.details["invariant"] = invariant;
  return vc;
}

VerifyCase skip_case(std::string description, const ProblemParams& p, std::string reason) {
  return {std::move(description), p, CaseStatus::Skip, {{"reason", std::move(reason)}}};
}

VerifyCase error_case(std::string description, const ProblemParams& p, std::string_view invariant,
                      const std::exception& e) {
  return make_case(std::move(description), p, false, {{"error", e.what()}}, invariant);
}

// Points strictly inside (lo, hi).
std::vector<double> open_between(double lo, double hi, int n) {
  std::vector<double> out;
  for (int k = 1; k <= n; ++k) out.push_back(lo + (hi - lo) * k / (n + 1));
  return out;
}

// Points covering [lo, hi] including both ends.
std::vector<double> closed_between(double lo, double hi, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
  if (n > 1) out.back() = hi;
  return out;
}

// Points in [lo, hi) stepping down from hi.
std::vector<double> below(double hi, double width, int n) {
  std::vector<double> out;
  for (int k = 1; k <= n; ++k) out.push_back(hi - width * k / n);
  return out;
}

// Fixed seed and a bit-level mapping to [0, 1), so reports do not depend on
// the standard library's distribution implementation.
std::vector<double> draws(double lo, double hi, int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    out.push_back(lo + (hi - lo) * u);
  }
  return out;
}

using Expectation = std::function<RegimeLabel(double c)>;

VerifyCase regime_case(std::string description, const ProblemParams& p, const std::vector<Shot>& shots,
                       const Expectation& expected) {
  Json mismatches = Json::array();
  std::size_t unresolved = 0;
  for (const auto& s : shots) {
    if (s.error.empty() && s.label.family == Family::Unresolved) ++unresolved;
    if (!s.error.empty() || !(s.label == expected(s.c))) {
      Json j = shot_json(s);
      j["expected"] = label_json(expected(s.c));
      mismatches.push_back(std::move(j));
    }
  }
  Json details = {{"samples", shots.size()}, {"unresolved", unresolved}};
  if (!shots.empty()) {
    details["c_range"] = {shots.front().c, shots.back().c};
    details["expected"] = label_json(expected(shots.front().c));
  }
  const bool pass = mismatches.empty() && !shots.empty();
  if (!pass) details["mismatches"] = std::move(mismatches);
  return make_case(std::move(description), p, pass, std::move(details), "regime");
}

Expectation fixed(Family family, Shape shape, LimitLabel limit) {
  return [=](double) { return RegimeLabel{family, shape, limit}; };
}

std::vector<Shot> slice(const std::vector<Shot>& all, std::size_t from, std::size_t n) {
  return {all.begin() + static_cast<std::ptrdiff_t>(from), all.begin() + static_cast<std::ptrdiff_t>(from + n)};
}

VerifyCase single_curvature_zero_case(const ProblemParams& p, const std::vector<Shot>& shots) {
  Json offenders = Json::array();
  for (const auto& s : shots) {
    if (s.fpp_zeros > 1) offenders.push_back({{"c", s.c}, {"fpp_zeros", s.fpp_zeros}});
  }
  const bool pass = offenders.empty();
  Json details = {{"samples", shots.size()}};
  if (!pass) details["offenders"] = std::move(offenders);
  return make_case("f'' vanishes at most once along any shot", p, pass, std::move(details), "single_fpp_zero");
}

// Once f' no longer reaches 0 for some c, it must not reach 0 for any larger c.
VerifyCase monotone_predicate_case(const ProblemParams& p, std::vector<Shot> shots) {
  std::sort(shots.begin(), shots.end(), [](const Shot& x, const Shot& y) { return x.c < y.c; });
  Json violations = Json::array();
  std::optional<double> first_false;
  for (const auto& s : shots) {
    if (!s.error.empty()) continue;
    if (!s.hits_zero && !first_false) first_false = s.c;
    if (s.hits_zero && first_false) violations.push_back({{"c_false", *first_false}, {"c_true", s.c}});
  }
  const bool pass = violations.empty();
  Json details = {{"samples", shots.size()}};
  if (!pass) details["violations"] = std::move(violations);
  return make_case("f' reaching 0 is monotone in c", p, pass, std::move(details), "monotone_fp_hits_zero");
}

VerifyCase blowup_shape_case(const ProblemParams& p, const std::vector<Shot>& shots, Family family) {
  const double bound = std::sqrt(p.a * p.a + 2.0 * p.b) + 1e-6;
  Json offenders = Json::array();
  std::size_t checked = 0;
  for (const auto& s : shots) {
    if (!s.error.empty() || s.label.family != family) continue;
    ++checked;
    if (s.max_f > bound || s.fpp_zeros != 0) {
      offenders.push_back({{"c", s.c}, {"max_f", s.max_f}, {"fpp_zeros", s.fpp_zeros}});
    }
  }
  const bool pass = offenders.empty() && checked > 0;
  Json details = {{"checked", checked}, {"bound", bound}};
  if (!pass) details["offenders"] = std::move(offenders);
  return make_case("blow-up shots stay concave with f <= sqrt(a^2 + 2b)", p, pass, std::move(details),
                   "blowup_concave_bounded");
}

VerifyCase critical_shot_case(const ProblemParams& p, const CriticalValue& cs, const IntegratorControls& ctl,
                              Family family, bool check_bound) {
  const Trajectory traj = critical_trajectory(p, cs, ctl);
  const RegimeLabel label = classify(traj);
  double max_f = 0.0;
  for (const auto& s : traj.samples) max_f = std::max(max_f, s.f);
  const double bound = std::sqrt(p.a * p.a + 2.0 * p.b) + 1e-6;
  const bool pass = label == RegimeLabel{family, Shape::Concave, LimitLabel::Zero} && (!check_bound || max_f <= bound);
  Json details = label_json(label);
  details["c"] = cs.value;
  details["termination"] = termination_string(traj.termination);
  details["max_f"] = max_f;
  if (check_bound) details["bound"] = bound;
  details["f_end"] = traj.final_state().f;
  return make_case("c_star shot is concave with f' -> 0", p, pass, std::move(details), "c_star_shot");
}

VerifyCase unique_zero_case(const ProblemParams& p, const CriticalValue& cs, const IntegratorControls& ctl,
                            unsigned jobs, std::vector<Shot>& pool) {
  std::vector<double> cs_draws;
  for (double c : draws(cs.value - 1.0, 0.0, 20, 0x5eedc0ffeeULL)) {
    if (std::abs(c - cs.value) > 10.0 * cs.tol) cs_draws.push_back(c);
  }
  const std::vector<Shot> shots = run_shots(p, cs_draws, ctl, jobs);
  Json offenders = Json::array();
  for (const auto& s : shots) {
    if (!s.error.empty() || s.label.limit == LimitLabel::Zero) offenders.push_back(shot_json(s));
  }
  pool.insert(pool.end(), shots.begin(), shots.end());
  const bool pass = offenders.empty();
  Json details = {{"draws", shots.size()}, {"range", {cs.value - 1.0, 0.0}}};
  if (!pass) details["offenders"] = std::move(offenders);
  return make_case("no other shot in [c_star - 1, 0] has f' -> 0", p, pass, std::move(details), "unique_zero_limit");
}

VerifyReport theorem4(const ProblemParams& p, const IntegratorControls& ctl, unsigned jobs) {
  VerifyReport r{"theorem4", {}};
  if (!(p.beta <= 1.0) || !(p.b >= 1.0)) {
    r.cases.push_back(skip_case("regime ladder for b >= 1", p, "needs beta <= 1 and b >= 1"));
    return r;
  }
  CriticalValue cs, cu;
  try {
    cs = find_c_star(p, ctl);
    cu = find_c_upper(p, ctl);
  } catch (const std::exception& e) {
    r.cases.push_back(error_case("critical values", p, "critical_values", e));
    return r;
  }
  const double lb = lower_bound_c_star(p);
  const double corner = p.a == 0.0 ? 0.0 : -p.a * (p.b - 1.0);
  r.cases.push_back(make_case("c_star lies in [lower bound, 0)", p, cs.value >= lb && cs.value < 0.0,
                              {{"c_star", cs.value}, {"lower_bound", lb}, {"iterations", cs.iterations}},
                              "c_star_bounds"));
  r.cases.push_back(make_case("c_star < c_upper <= -a(b-1)", p, cs.value < cu.value && cu.value <= corner,
                              {{"c_star", cs.value}, {"c_upper", cu.value}, {"corner", corner}}, "critical_order"));
  r.cases.push_back(critical_shot_case(p, cs, ctl, Family::C21ToZero, true));

  constexpr int n = 8;
  std::vector<double> grid = below(cs.value, 2.0, n);
  for (double c : open_between(cs.value, cu.value, n)) grid.push_back(c);
  for (double c : closed_between(cu.value, 0.0, n)) grid.push_back(c);
  for (double c : open_between(0.0, 2.0, n)) grid.push_back(c);
  std::vector<Shot> shots = run_shots(p, grid, ctl, jobs);

  r.cases.push_back(regime_case("c < c_star blows up after f' reaches 0", p, slice(shots, 0, n),
                                fixed(Family::C22, Shape::Concave, LimitLabel::Blowup)));
  r.cases.push_back(regime_case("c_star < c < c_upper is concave-convex with f' -> 1", p, slice(shots, n, n),
                                fixed(Family::C21ToOne, Shape::ConcaveConvex, LimitLabel::One)));
  const bool affine = p.b == 1.0;
  r.cases.push_back(regime_case("c_upper <= c <= 0 is concave with f' -> 1", p, slice(shots, 2 * n, n),
                                fixed(Family::C1, affine ? Shape::Affine : Shape::Concave, LimitLabel::One)));
  r.cases.push_back(regime_case("c > 0 is convex-concave with f' -> 1", p, slice(shots, 3 * n, n),
                                fixed(Family::C0, Shape::ConvexConcave, LimitLabel::One)));
  r.cases.push_back(blowup_shape_case(p, slice(shots, 0, n), Family::C22));
  r.cases.push_back(unique_zero_case(p, cs, ctl, jobs, shots));
  r.cases.push_back(single_curvature_zero_case(p, shots));
  std::vector<Shot> nonpositive;
  std::copy_if(shots.begin(), shots.end(), std::back_inserter(nonpositive), [](const Shot& s) { return s.c <= 0.0; });
  r.cases.push_back(monotone_predicate_case(p, std::move(nonpositive)));
  return r;
}

VerifyReport theorem5(const ProblemParams& p, const IntegratorControls& ctl, unsigned jobs) {
  VerifyReport r{"theorem5", {}};
  if (!(p.beta <= 1.0) || !(p.b < 1.0)) {
    r.cases.push_back(skip_case("regime ladder for b < 1", p, "needs beta <= 1 and b < 1"));
    return r;
  }
  constexpr int n = 8;
  CriticalValue cu;
  try {
    cu = find_c_upper(p, ctl);
  } catch (const std::exception& e) {
    r.cases.push_back(error_case("c_upper", p, "critical_values", e));
    return r;
  }
  const double floor = p.a * (1.0 - p.b);
  r.cases.push_back(make_case("c_upper >= a(1-b)", p, cu.value >= floor, {{"c_upper", cu.value}, {"floor", floor}},
                              "c_upper_bound"));

  std::vector<double> grid;
  std::size_t n_below = n, n_mid = 0;
  double c_star = 0.0;
  if (p.b > 0.0) {
    CriticalValue cs;
    try {
      cs = find_c_star(p, ctl);
    } catch (const std::exception& e) {
      r.cases.push_back(error_case("c_star", p, "critical_values", e));
      return r;
    }
    c_star = cs.value;
    r.cases.push_back(make_case("c_star < 0 <= c_upper", p, cs.value < 0.0 && cu.value >= 0.0,
                                {{"c_star", cs.value}, {"c_upper", cu.value}}, "critical_order"));
    r.cases.push_back(critical_shot_case(p, cs, ctl, Family::C0P1, false));
    grid = below(cs.value, 2.0, n);
    for (double c : open_between(cs.value, 0.0, n)) grid.push_back(c);
    n_mid = n;
  } else {
    grid = below(0.0, 2.0, n);
    grid.push_back(0.0);
    n_mid = 1;
  }
  for (double c : closed_between(p.b == 0.0 ? cu.value / n : 0.0, cu.value, n)) grid.push_back(c);
  for (double c : open_between(cu.value, cu.value + 2.0, n)) grid.push_back(c);
  std::vector<Shot> shots = run_shots(p, grid, ctl, jobs);

  r.cases.push_back(regime_case(p.b > 0.0 ? "c < c_star blows up after f' reaches 0" : "c < 0 blows up", p,
                                slice(shots, 0, n_below), fixed(Family::C0P2, Shape::Concave, LimitLabel::Blowup)));
  if (p.b > 0.0) {
    r.cases.push_back(regime_case("c_star < c < 0 is concave-convex with f' -> 1", p, slice(shots, n_below, n_mid),
                                  fixed(Family::C0P1, Shape::ConcaveConvex, LimitLabel::One)));
  } else {
    r.cases.push_back(regime_case("c = 0 with b = 0 is the constant solution", p, slice(shots, n_below, n_mid),
                                  fixed(Family::C1P, Shape::Constant, LimitLabel::Zero)));
  }
  r.cases.push_back(regime_case("0 <= c <= c_upper is convex with f' -> 1", p, slice(shots, n_below + n_mid, n),
                                fixed(Family::C1P, Shape::Convex, LimitLabel::One)));
  r.cases.push_back(regime_case("c > c_upper is convex-concave with f' -> 1", p, slice(shots, n_below + n_mid + n, n),
                                fixed(Family::C2P, Shape::ConvexConcave, LimitLabel::One)));
  if (p.b > 0.0) {
    CriticalValue cs;
    cs.value = c_star;
    cs.tol = 1e-10;
    r.cases.push_back(unique_zero_case(p, cs, ctl, jobs, shots));
  }
  r.cases.push_back(single_curvature_zero_case(p, shots));
  return r;
}

VerifyReport beta_gt_1(const ProblemParams& p, const IntegratorControls& ctl, unsigned jobs) {
  VerifyReport r{"beta-gt-1", {}};
  if (!(p.beta > 1.0)) {
    r.cases.push_back(skip_case("partial results for beta > 1", p, "needs beta > 1"));
    return r;
  }
  const bool c_star_allowed = p.b > 0.0 && p.b <= p.beta / (p.beta - 1.0);
  if (c_star_allowed) {
    try {
      const CriticalValue cs = find_c_star(p, ctl);
      const Trajectory traj = critical_trajectory(p, cs, ctl);
      const RegimeLabel label = classify(traj);
      Json details = label_json(label);
      details["c_star"] = cs.value;
      details["termination"] = termination_string(traj.termination);
      r.cases.push_back(make_case("c_star exists and its shot has f' -> 0", p, label.limit == LimitLabel::Zero,
                                  std::move(details), "c_star_zero_limit"));
    } catch (const std::exception& e) {
      r.cases.push_back(error_case("c_star exists and its shot has f' -> 0", p, "c_star_zero_limit", e));
    }
  } else {
    bool refused = false;
    std::string what;
    try {
      find_c_star(p, ctl);
    } catch (const Error& e) {
      refused = e.code() == ErrorCode::Precondition;
      what = e.what();
    }
    r.cases.push_back(make_case("c_star refused outside 0 < b <= beta/(beta-1)", p, refused, {{"error", what}},
                                "c_star_precondition"));
  }

  bool refused = false;
  std::string what;
  try {
    find_c_upper(p, ctl);
  } catch (const Error& e) {
    refused = e.code() == ErrorCode::Precondition;
    what = e.what();
  }
  r.cases.push_back(make_case("c_upper refused for beta > 1", p, refused, {{"error", what}}, "c_upper_precondition"));

  if (p.a > 0.0 && p.beta <= 2.0) {
    const double c_min = (p.b * p.b - (2.0 * p.b - p.beta) * p.a * p.a) / (2.0 * p.a);
    std::vector<double> grid;
    for (int k = 1; k <= 5; ++k) grid.push_back(c_min + 0.5 * k);
    const std::vector<Shot> shots = run_shots(p, grid, ctl, jobs);
    Json offenders = Json::array();
    for (const auto& s : shots) {
      if (!sufficient_condition_limit_one(p, s.c) || !s.error.empty() || s.label.limit != LimitLabel::One) {
        offenders.push_back(shot_json(s));
      }
    }
    const bool pass = offenders.empty();
    Json details = {{"c_min", c_min}, {"samples", shots.size()}};
    if (!pass) details["offenders"] = std::move(offenders);
    r.cases.push_back(make_case("2ac >= b^2 - (2b - beta)a^2 gives f' -> 1", p, pass, std::move(details),
                                "sufficient_limit_one"));
  } else {
    r.cases.push_back(skip_case("2ac >= b^2 - (2b - beta)a^2 gives f' -> 1", p, "needs a > 0 and beta <= 2"));
  }

  if (p.a == 0.0) {
    const std::vector<Shot> shots = run_shots(p, closed_between(lower_bound_c_star(p) - 1.0, 0.0, 15), ctl, jobs);
    Json offenders = Json::array();
    for (const auto& s : shots) {
      if (!s.error.empty() || s.label.family == Family::C1) offenders.push_back(shot_json(s));
    }
    const bool pass = offenders.empty();
    Json details = {{"samples", shots.size()}};
    if (!pass) details["offenders"] = std::move(offenders);
    r.cases.push_back(make_case("no c <= 0 is globally concave with f' -> 1 when a = 0", p, pass, std::move(details),
                                "c1_empty"));
  } else {
    r.cases.push_back(skip_case("no c <= 0 is globally concave with f' -> 1 when a = 0", p, "needs a = 0"));
  }
  return r;
}

}  // namespace

VerifyReport run_verify(std::string_view suite, const ProblemParams& params, const IntegratorControls& controls,
                        unsigned jobs) {
  params.validate();
  controls.validate();
  if (suite == "theorem4") return theorem4(params, controls, jobs);
  if (suite == "theorem5") return theorem5(params, controls, jobs);
  if (suite == "beta-gt-1") return beta_gt_1(params, controls, jobs);
  throw Error(ErrorCode::InvalidControls, "unknown suite '" + std::string(suite) + "'");
}

}  // namespace mixconv
