// mixconv: integrate, classify, locate critical shots, sweep and verify.
//
// Exit codes: 0 ok, 2 bad flags, 3 integration error, 4 critical-value
// search refused or failed, 5 verification FAIL.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixconv/classifier.hpp"
#include "mixconv/error.hpp"
#include "mixconv/monitors.hpp"
#include "mixconv/ode_core.hpp"
#include "mixconv/report.hpp"
#include "mixconv/shooting.hpp"

namespace {

using namespace mixconv;

constexpr int kExitFlags = 2;
constexpr int kExitIntegrator = 3;
constexpr int kExitCritical = 4;

struct RunConfig {
  double beta = 1.0;
  double a = 0.0;
  double b = 0.0;
  std::optional<double> c;
  std::optional<double> c_min;
  std::optional<double> c_max;
  int n = 9;
  std::string which;
  std::string suite;
  double tol = 1e-10;
  double t_max = 50.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  std::string out;
  std::string format;
  unsigned jobs = 0;
  bool monitors = false;
};

struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ProblemParams params_of(const RunConfig& cfg) { return {cfg.beta, cfg.a, cfg.b, 1}; }

IntegratorControls controls_of(const RunConfig& cfg) {
  IntegratorControls ctl;
  ctl.t_max = cfg.t_max;
  ctl.rtol = cfg.rtol;
  ctl.atol = cfg.atol;
  return ctl;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FlagError("cannot open '" + path + "' for writing");
  os << text;
}

double require_c(const RunConfig& cfg) {
  if (!cfg.c) throw FlagError("--c is required");
  return *cfg.c;
}

int cmd_integrate(const RunConfig& cfg) {
  const Trajectory traj = integrate(params_of(cfg), require_c(cfg), controls_of(cfg));
  const std::string summary = summary_json(traj).dump() + "\n";
  if (cfg.format == "json") {
    if (!cfg.out.empty()) throw FlagError("--format json prints the summary only; drop --out");
    std::cout << summary;
    return 0;
  }
  std::ostringstream csv;
  if (cfg.monitors) {
    write_csv_with_monitors(csv, traj);
  } else {
    write_csv(csv, traj);
  }
  emit(csv.str(), cfg.out);
  (cfg.out.empty() ? std::cerr : std::cout) << summary;
  return 0;
}

int cmd_classify(const RunConfig& cfg) {
  const ProblemParams p = params_of(cfg);
  const Trajectory traj = integrate(p, require_c(cfg), controls_of(cfg));
  emit(classification_json(traj, classify(traj, p)).dump(2) + "\n", cfg.out);
  return 0;
}

int cmd_critical(const RunConfig& cfg) {
  const ProblemParams p = params_of(cfg);
  const IntegratorControls ctl = controls_of(cfg);
  CriticalValue cv;
  try {
    if (cfg.which == "cstar") {
      cv = find_c_star(p, ctl, cfg.tol);
    } else if (cfg.which == "cupper") {
      cv = find_c_upper(p, ctl, cfg.tol);
    } else {
      throw FlagError("--which must be cstar or cupper");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BracketFailure || e.code() == ErrorCode::Precondition) {
      std::cerr << e.what() << '\n';
      return kExitCritical;
    }
    throw;
  }
  emit(to_json(cv).dump(2) + "\n", cfg.out);
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  if (!cfg.c_min || !cfg.c_max) throw FlagError("sweep needs --c-min and --c-max");
  if (cfg.n < 1) throw FlagError("--n must be >= 1");
  if (*cfg.c_min > *cfg.c_max) throw FlagError("--c-min must not exceed --c-max");
  std::vector<double> grid;
  for (int k = 0; k < cfg.n; ++k) {
    grid.push_back(cfg.n == 1 ? *cfg.c_min : *cfg.c_min + (*cfg.c_max - *cfg.c_min) * k / (cfg.n - 1));
  }
  if (cfg.n > 1) grid.back() = *cfg.c_max;
  const std::vector<SweepEntry> entries = sweep(params_of(cfg), grid, controls_of(cfg), cfg.jobs);
  if (cfg.format == "json") {
    emit(to_json(entries).dump(2) + "\n", cfg.out);
    return 0;
  }
  std::ostringstream csv;
  csv << "c,family,shape,limit,termination,error\n";
  for (const auto& e : entries) {
    csv << format_double(e.c) << ',';
    if (e.label) {
      csv << to_string(e.label->family) << ',' << to_string(e.label->shape) << ',' << to_string(e.label->limit) << ','
          << termination_string(*e.termination) << ",\n";
    } else {
      csv << ",,,,\"" << e.error << "\"\n";
    }
  }
  emit(csv.str(), cfg.out);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  const VerifyReport report = run_verify(cfg.suite, params_of(cfg), controls_of(cfg), cfg.jobs);
  emit(to_json(report).dump(2) + "\n", cfg.out);
  std::cerr << report.suite << ": " << report.count(CaseStatus::Pass) << " pass, " << report.count(CaseStatus::Fail)
            << " fail, " << report.count(CaseStatus::Skip) << " skip\n";
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shooting solver for f''' + f f'' + beta f'(f' - 1) = 0, f(0) = a, f'(0) = b"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file; command-line flags take precedence");

  RunConfig cfg;
  app.add_option("--beta", cfg.beta, "beta > 0")->capture_default_str();
  app.add_option("--a", cfg.a, "f(0) >= 0")->capture_default_str();
  app.add_option("--b", cfg.b, "f'(0) >= 0")->capture_default_str();
  app.add_option("--c", cfg.c, "f''(0)");
  app.add_option("--c-min", cfg.c_min, "sweep: lower end of the c grid");
  app.add_option("--c-max", cfg.c_max, "sweep: upper end of the c grid");
  app.add_option("--n", cfg.n, "sweep: number of grid points")->capture_default_str();
  app.add_option("--which", cfg.which, "critical: cstar or cupper")->check(CLI::IsMember({"cstar", "cupper"}));
  app.add_option("--suite", cfg.suite, "verify: theorem4, theorem5 or beta-gt-1")
      ->check(CLI::IsMember({"theorem4", "theorem5", "beta-gt-1"}));
  app.add_option("--tol", cfg.tol, "critical: bracket width")->capture_default_str();
  app.add_option("--t-max", cfg.t_max, "integration horizon")->capture_default_str();
  app.add_option("--rtol", cfg.rtol, "relative tolerance")->capture_default_str();
  app.add_option("--atol", cfg.atol, "absolute tolerance")->capture_default_str();
  app.add_option("--out", cfg.out, "output file (default: standard output)");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", cfg.jobs, "worker threads (0: one per core)")->capture_default_str();
  app.add_flag("--monitors", cfg.monitors, "integrate: add H, L, K columns");

  auto* integrate_cmd = app.add_subcommand("integrate", "write a trajectory CSV and a JSON summary");
  auto* classify_cmd = app.add_subcommand("classify", "print the regime label of one shot");
  auto* critical_cmd = app.add_subcommand("critical", "locate c_star or c_upper by bisection");
  auto* sweep_cmd = app.add_subcommand("sweep", "classify a uniform grid of c values");
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFlags;
  }

  try {
    auto given = [&](const char* name) { return app.count(name) > 0; };
    auto only_with = [&](const char* name, CLI::App* cmd) {
      if (given(name) && !cmd->parsed()) throw FlagError(std::string(name) + " only applies to " + cmd->get_name());
    };
    only_with("--c-min", sweep_cmd);
    only_with("--c-max", sweep_cmd);
    only_with("--n", sweep_cmd);
    only_with("--which", critical_cmd);
    only_with("--suite", verify_cmd);
    only_with("--monitors", integrate_cmd);
    if (given("--c") && !(integrate_cmd->parsed() || classify_cmd->parsed())) {
      throw FlagError("--c only applies to integrate and classify");
    }
    if (critical_cmd->parsed() && cfg.which.empty()) throw FlagError("critical needs --which");
    if (verify_cmd->parsed() && cfg.suite.empty()) throw FlagError("verify needs --suite");
    params_of(cfg).validate();
    controls_of(cfg).validate();

    if (integrate_cmd->parsed()) return cmd_integrate(cfg);
    if (classify_cmd->parsed()) return cmd_classify(cfg);
    if (critical_cmd->parsed()) return cmd_critical(cfg);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg);
    return cmd_verify(cfg);
  } catch (const FlagError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFlags;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    const bool bad_flag = e.code() == ErrorCode::InvalidParams || e.code() == ErrorCode::InvalidControls;
    return bad_flag ? kExitFlags : kExitIntegrator;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitIntegrator;
  }
}
