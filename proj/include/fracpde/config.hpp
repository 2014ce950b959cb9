// Run configuration: JSON document mirroring SolverConfig plus the
// initial-data cosine series, output directory and snapshot cadence.
#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracpde/solver.hpp"
#include "fracpde/torus.hpp"

namespace fracpde {

/// offset + sum_m amp_m cos(n_m . x); every mode vector has dim entries.
struct CosineSeries {
  double offset = 0.0;
  std::vector<std::pair<std::vector<int>, double>> modes;
};

struct RunConfig {
  SolverConfig solver;
  CosineSeries u_init;
  CosineSeries p_init;
  std::string out_dir = "out";
  int snapshot_every = 0;  // 0 = no snapshots
  std::uint64_t seed = 42;
};

inline GridField build_cosine_field(const TorusGrid& grid,
                                    const CosineSeries& series) {
  for (const auto& [n, amp] : series.modes) {
    if (static_cast<int>(n.size()) != grid.dim) {
      throw std::invalid_argument("cosine series: mode vector length != dim");
    }
    (void)amp;
  }
  GridField out(grid);
  const double h = grid.spacing();
  for (std::size_t flat = 0; flat < out.samples.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    double v = series.offset;
    for (const auto& [n, amp] : series.modes) {
      double phase = 0.0;
      for (int d = 0; d < grid.dim; ++d) {
        phase += n[static_cast<std::size_t>(d)] * h * idx[static_cast<std::size_t>(d)];
      }
      v += amp * std::cos(phase);
    }
    out.samples[flat] = v;
  }
  return out;
}

inline CosineSeries parse_cosine_series(const nlohmann::json& j) {
  CosineSeries s;
  s.offset = j.value("offset", 0.0);
  if (j.contains("modes")) {
    for (const auto& m : j.at("modes")) {
      s.modes.emplace_back(m.at("n").get<std::vector<int>>(),
                           m.at("amp").get<double>());
    }
  }
  return s;
}

inline RunConfig parse_run_config(const nlohmann::json& j) {
  const auto& g = j.at("grid");
  const auto& t = j.at("time");
  SolverConfig solver{FractionalOrder(j.at("alpha").get<double>()),
                      j.at("s").get<double>(),
                      TorusGrid(g.at("dim").get<int>(), g.at("points").get<int>()),
                      TimeGrid(t.at("tau").get<double>(), t.at("n_steps").get<int>())};
  solver.rho = j.value("rho", 0.0);
  solver.eps = j.value("eps", 0.0);
  if (j.contains("picard")) {
    const auto& p = j.at("picard");
    solver.picard_tol = p.value("tol", solver.picard_tol);
    solver.picard_max = p.value("max", solver.picard_max);
    solver.picard_damping = p.value("damping", solver.picard_damping);
  }
  solver.clip_negative = j.value("clip_negative", false);
  solver.tol_pos = j.value("tol_pos", 1e-8);
  solver.validate();

  RunConfig cfg{solver, parse_cosine_series(j.at("u_init")),
                parse_cosine_series(j.at("p_init"))};
  cfg.out_dir = j.value("out_dir", std::string("out"));
  cfg.snapshot_every = j.value("snapshot_every", 0);
  cfg.seed = j.value("seed", std::uint64_t{42});
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  nlohmann::json j;
  in >> j;
  return parse_run_config(j);
}

/// Builds and validates the initial fields (strictly positive at nodes).
inline std::pair<GridField, GridField> initial_fields(const RunConfig& cfg) {
  GridField u = build_cosine_field(cfg.solver.grid, cfg.u_init);
  GridField p = build_cosine_field(cfg.solver.grid, cfg.p_init);
  if (min_value(u) <= 0.0 || min_value(p) <= 0.0) {
    throw InvalidInitialData("initial cosine series must be positive at all nodes");
  }
  return {std::move(u), std::move(p)};
}

}  // namespace fracpde
