#pragma once

// JSON records and the verification suites behind `mixconv verify`.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mixconv/asymptotics.hpp"
#include "mixconv/classifier.hpp"
#include "mixconv/ode_core.hpp"
#include "mixconv/shooting.hpp"

namespace mixconv {

using Json = nlohmann::ordered_json;

/// "LIMIT(0)", "LIMIT(1)", "BLOWUP", "HORIZON" or "STOPPED".
std::string termination_string(const Termination& term);

Json to_json(const ProblemParams& params);
Json to_json(const ShootState& state);
/// {termination, events_count, final_state}
Json summary_json(const Trajectory& traj);
/// {family, shape, limit, events: [{kind, t}], termination}
Json classification_json(const Trajectory& traj, const RegimeLabel& label);
/// {which, value, bracket: [lo, hi], tol, iterations, predicate}
Json to_json(const CriticalValue& cv);
/// {model, A, l, window: [t_lo, t_hi], residual}
Json to_json(const TailFit& fit);
/// One object per entry: {c, family, shape, limit, termination} or {c, error}.
Json to_json(const std::vector<SweepEntry>& entries);

enum class CaseStatus { Pass, Fail, Skip };

std::string_view to_string(CaseStatus status);

struct VerifyCase {
  std::string description;
  ProblemParams params;
  CaseStatus status = CaseStatus::Skip;
  // On FAIL: "invariant" names the broken property, the rest are the numbers.
  Json details = Json::object();
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCase> cases;

  int exit_code() const;
  std::size_t count(CaseStatus status) const;
};

Json to_json(const VerifyReport& report);

/// Runs one suite. Throws Error(InvalidControls) for an unknown name.
VerifyReport run_verify(std::string_view suite, const ProblemParams& params, const IntegratorControls& controls,
                        unsigned jobs = 0);

}  // namespace mixconv
