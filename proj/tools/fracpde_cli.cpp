// fracpde command line: weight tables, verification suites, solver runs
// and refinement studies. Exit codes: 0 success, 1 verification failure,
// 2 solver non-convergence, 3 bad input.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracpde/config.hpp"
#include "fracpde/fld_io.hpp"
#include "fracpde/refine.hpp"
#include "fracpde/solver.hpp"
#include "fracpde/verify.hpp"
#include "fracpde/weights.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitNonConvergence = 2;
constexpr int kExitBadInput = 3;

int cmd_weights(double alpha, int n, const std::string& out_path) {
  const fracpde::CaputoWeights w =
      fracpde::build_weights(fracpde::FractionalOrder(alpha), n);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot open " << out_path << "\n";
    return kExitBadInput;
  }
  out << "k,lambda_k\n";
  char row[64];
  for (int k = 1; k <= n; ++k) {
    std::snprintf(row, sizeof(row), "%d,%.17g\n", k, w.lambda(k));
    out << row;
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  const fracpde::CheckList checks = fracpde::verify_suite(suite, seed);
  nlohmann::json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["checks"] = nlohmann::json::array();
  int failed = 0;
  std::string first_failure;
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"value", c.value},
                           {"threshold", c.threshold}});
    if (!c.pass) {
      ++failed;
      if (first_failure.empty()) first_failure = c.name;
    }
  }
  j["passed"] = static_cast<int>(checks.size()) - failed;
  j["failed"] = failed;
  j["all_pass"] = failed == 0;
  std::cout << j.dump(2) << "\n";
  if (failed > 0) {
    std::cerr << "verification failed: " << first_failure << "\n";
    return kExitVerifyFail;
  }
  return kExitOk;
}

nlohmann::json verdicts_json(const fracpde::Verdicts& v) {
  return {{"mass_ok", v.mass_ok},
          {"energy_ok", v.energy_ok},
          {"positivity_ok", v.positivity_ok},
          {"pressure_mean_ok", v.pressure_mean_ok},
          {"max_mass_drift", v.max_mass_drift},
          {"max_energy_excess", v.max_energy_excess},
          {"min_field_value", v.min_field_value},
          {"max_pressure_mean_excess", v.max_pressure_mean_excess}};
}

int cmd_solve(const std::string& config_path, const std::string& out_override) {
  const fracpde::RunConfig cfg = fracpde::load_run_config(config_path);
  const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;
  std::filesystem::create_directories(out_dir);
  auto [u0, p0] = fracpde::initial_fields(cfg);
  const fracpde::RunResult r = fracpde::run(cfg.solver, u0, p0);

  std::ofstream ledger(out_dir + "/ledger.csv");
  ledger << fracpde::ledger_csv(r.history, r.ledger, cfg.solver);
  if (cfg.snapshot_every > 0) {
    char name[64];
    for (std::size_t k = 0; k < r.history.u_steps.size(); k += cfg.snapshot_every) {
      const double t = cfg.solver.time.t(static_cast<int>(k));
      std::snprintf(name, sizeof(name), "/u_%06zu.fld", k);
      fracpde::write_fld(out_dir + name, r.history.u_steps[k], t);
      std::snprintf(name, sizeof(name), "/p_%06zu.fld", k);
      fracpde::write_fld(out_dir + name, r.history.p_steps[k], t);
    }
  }

  const fracpde::Verdicts v = fracpde::diagnostics(r.history, r.ledger, cfg.solver);
  nlohmann::json j;
  j["config"] = config_path;
  j["out_dir"] = out_dir;
  j["steps"] = cfg.solver.time.n_steps;
  j["certified"] = r.history.certified;
  j["verdicts"] = verdicts_json(v);
  std::cout << j.dump(2) << "\n";
  return v.all_ok() ? kExitOk : kExitVerifyFail;
}

int cmd_refine(const std::string& config_path, const std::string& knob,
               int levels, const std::string& out_override) {
  const fracpde::RunConfig cfg = fracpde::load_run_config(config_path);
  const fracpde::RefineReport rep =
      fracpde::run_refinement(cfg, fracpde::parse_knob(knob), levels);
  const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;
  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir + "/refine_" + knob + ".csv");
  csv << fracpde::refine_csv(rep);

  nlohmann::json j;
  j["knob"] = knob;
  j["levels"] = levels;
  j["knob_values"] = rep.knob_values;
  j["du_l2"] = rep.du;
  j["dp_l2"] = rep.dp;
  j["psi"] = rep.psi;
  j["nonincreasing_tail"] = rep.nonincreasing_tail();
  std::cout << j.dump(2) << "\n";
  return rep.nonincreasing_tail() ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete Caputo calculus and the regularized fractional "
               "porous-medium system on the torus"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  app.add_option("--seed", seed, "seed for the randomized suites");

  double alpha = 0.5;
  int n = 100;
  std::string out_path = "weights.csv";
  auto* weights = app.add_subcommand("weights", "write the lambda table as CSV");
  weights->add_option("--alpha", alpha, "fractional order in (0,1]")->required();
  weights->add_option("--n", n, "number of weights")->required();
  weights->add_option("--out", out_path, "output CSV path");

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite,
                     "weights|caputo|ibp|compactness|spectral|solver|all");

  std::string config_path, out_dir;
  auto* solve = app.add_subcommand("solve", "run the solver from a JSON config");
  solve->add_option("--config", config_path, "config path")->required();
  solve->add_option("--out", out_dir, "output directory override");

  std::string knob = "tau";
  int levels = 4;
  auto* refine = app.add_subcommand("refine", "refinement study for one knob");
  refine->add_option("--config", config_path, "config path")->required();
  refine->add_option("--knob", knob, "tau|eps|rho");
  refine->add_option("--levels", levels, "number of levels (>= 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (weights->parsed()) return cmd_weights(alpha, n, out_path);
    if (verify->parsed()) return cmd_verify(suite, seed);
    if (solve->parsed()) return cmd_solve(config_path, out_dir);
    if (refine->parsed()) return cmd_refine(config_path, knob, levels, out_dir);
  } catch (const fracpde::NonConvergence& e) {
    std::cerr << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
