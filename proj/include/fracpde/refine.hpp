// Refinement studies: re-run the solver with one knob (tau, eps or rho)
// geometrically refined and report pairwise L^2(0,T;L^2) differences of
// the piecewise-constant u and p between consecutive levels.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracpde/config.hpp"
#include "fracpde/solver.hpp"

namespace fracpde {

enum class RefineKnob { tau, eps, rho };

inline RefineKnob parse_knob(const std::string& s) {
  if (s == "tau") return RefineKnob::tau;
  if (s == "eps") return RefineKnob::eps;
  if (s == "rho") return RefineKnob::rho;
  throw std::invalid_argument("knob must be one of tau|eps|rho");
}

struct RefineReport {
  RefineKnob knob = RefineKnob::tau;
  std::vector<double> knob_values;  // per level
  std::vector<double> du;           // pairwise L^2(0,T;L^2) differences of u
  std::vector<double> dp;           //   and of p
  std::vector<double> psi;          // int_0^T int u^2 per level

  /// Contract: the last two pairs are non-increasing.
  bool nonincreasing_tail() const {
    const std::size_t m = du.size();
    if (m < 2) return false;
    return du[m - 1] <= du[m - 2] && dp[m - 1] <= dp[m - 2];
  }
};

namespace detail {

/// L^2(0,T;L^2) distance between runs on the same spatial grid whose step
/// counts differ by an integer factor (1 for eps/rho, 2 for tau halving).
inline double path_l2_difference(const std::vector<GridField>& coarse,
                                 const std::vector<GridField>& fine,
                                 double tau_fine) {
  const std::size_t nc = coarse.size() - 1, nf = fine.size() - 1;
  const std::size_t factor = nf / nc;
  double acc = 0.0;
  for (std::size_t i = 1; i <= nf; ++i) {
    const std::size_t k = (i + factor - 1) / factor;  // coarse cell containing fine cell i
    const double d = vnorm(coarse[k] - fine[i]);
    acc += tau_fine * d * d;
  }
  return std::sqrt(acc);
}

inline double psi_functional(const std::vector<GridField>& u, double tau) {
  double acc = 0.0;
  for (std::size_t k = 1; k < u.size(); ++k) {
    const double n = lp_norm(u[k], 2.0);
    acc += tau * n * n;
  }
  return acc;
}

}  // namespace detail

/// Runs `levels` solves with the knob halved per level and collects the
/// pairwise differences. tau refinement keeps the horizon fixed.
inline RefineReport run_refinement(const RunConfig& base, RefineKnob knob,
                                   int levels) {
  if (levels < 2) throw std::invalid_argument("refine: levels must be >= 2");
  RefineReport rep;
  rep.knob = knob;
  std::vector<RunResult> results;
  std::vector<double> taus;
  for (int level = 0; level < levels; ++level) {
    SolverConfig cfg = base.solver;
    const double factor = std::pow(2.0, level);
    switch (knob) {
      case RefineKnob::tau:
        cfg.time = TimeGrid(base.solver.time.tau / factor,
                            base.solver.time.n_steps * (1 << level));
        rep.knob_values.push_back(cfg.time.tau);
        break;
      case RefineKnob::eps:
        cfg.eps = base.solver.eps / factor;
        rep.knob_values.push_back(cfg.eps);
        break;
      case RefineKnob::rho:
        cfg.rho = base.solver.rho / factor;
        rep.knob_values.push_back(cfg.rho);
        break;
    }
    RunConfig level_cfg = base;
    level_cfg.solver = cfg;
    auto [u0, p0] = initial_fields(level_cfg);
    results.push_back(run(cfg, u0, p0));
    taus.push_back(cfg.time.tau);
    rep.psi.push_back(detail::psi_functional(results.back().history.u_steps, cfg.time.tau));
  }
  for (int level = 0; level + 1 < levels; ++level) {
    const auto& c = results[static_cast<std::size_t>(level)].history;
    const auto& f = results[static_cast<std::size_t>(level) + 1].history;
    const double tf = taus[static_cast<std::size_t>(level) + 1];
    rep.du.push_back(detail::path_l2_difference(c.u_steps, f.u_steps, tf));
    rep.dp.push_back(detail::path_l2_difference(c.p_steps, f.p_steps, tf));
  }
  return rep;
}

inline std::string refine_csv(const RefineReport& rep) {
  std::string out = "pair,knob_coarse,knob_fine,du_l2,dp_l2\n";
  char row[200];
  for (std::size_t i = 0; i < rep.du.size(); ++i) {
    std::snprintf(row, sizeof(row), "%zu,%.17g,%.17g,%.17g,%.17g\n", i + 1,
                  rep.knob_values[i], rep.knob_values[i + 1], rep.du[i], rep.dp[i]);
    out += row;
  }
  return out;
}

}  // namespace fracpde
