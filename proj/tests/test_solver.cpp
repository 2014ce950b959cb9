#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <json.hpp>

#include "backward_euler_ref.hpp"
#include "fracpde/caputo.hpp"
#include "fracpde/config.hpp"
#include "fracpde/refine.hpp"
#include "fracpde/rng.hpp"
#include "fracpde/solver.hpp"
#include "fracpde/verify.hpp"

using namespace fracpde;

namespace {
GridField constant_field(const TorusGrid& g, double v) {
  return GridField(g, std::vector<double>(g.total(), v));
}

GridField cosine_bump(const TorusGrid& g, double offset, double amp) {
  GridField f(g);
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const auto idx = g.unflatten(i);
    f.samples[i] = offset + amp * std::cos(g.spacing() * idx[0]);
  }
  return f;
}

SolverConfig smooth_config() {
  SolverConfig cfg{FractionalOrder(0.5), 0.75, TorusGrid(1, 32), TimeGrid(1.0 / 32, 16)};
  cfg.rho = 1e-2;
  cfg.eps = 1e-2;
  return cfg;
}
}  // namespace

TEST_CASE("constant initial data follows the scalar zero-mode dynamics") {
  const double a = 1.3, c = 0.8, alpha = 0.5;
  SolverConfig cfg{FractionalOrder(alpha), 0.75, TorusGrid(1, 16), TimeGrid(1.0 / 16, 8)};
  cfg.rho = 1e-2;
  cfg.eps = 1e-2;
  const RunResult r = run(cfg, constant_field(cfg.grid, a), constant_field(cfg.grid, c));

  const double coeff = std::pow(cfg.time.tau, alpha) / gamma_fn(alpha);
  for (int k = 1; k <= 8; ++k) {
    CHECK(lp_norm(r.history.u_steps[static_cast<std::size_t>(k)] - constant_field(cfg.grid, a),
                  std::numeric_limits<double>::infinity()) <= 1e-12);
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += std::pow(static_cast<double>(k - i + 1), alpha - 1.0);
    CHECK(std::abs(r.ledger.mean_p[static_cast<std::size_t>(k)] - (c + coeff * a * a * s)) <=
          1e-10);
    CHECK(r.ledger.mean_p[static_cast<std::size_t>(k)] >=
          r.ledger.mean_p[static_cast<std::size_t>(k) - 1]);
    // energy is flat: u constant, p spatially constant
    CHECK(std::abs(r.ledger.H[static_cast<std::size_t>(k)] - r.ledger.H[0]) <=
          1e-10 * r.ledger.H[0]);
    CHECK(r.ledger.S[static_cast<std::size_t>(k)] <= 1e-12);
  }
  CHECK(diagnostics(r.history, r.ledger, cfg).all_ok());
  const double l3_expect = cfg.time.horizon() * cfg.grid.volume() * a * a * a;
  CHECK(std::abs(r.ledger.l3_accum.back() - l3_expect) <= 1e-12 * l3_expect);
  for (const auto& rep : r.history.reports) CHECK(rep.picard_iters <= 3);
}

TEST_CASE("pressure step reductions") {
  SolverConfig cfg{FractionalOrder(0.5), 0.6, TorusGrid(1, 16), TimeGrid(0.125, 4)};
  cfg.eps = 1e-2;
  const CaputoWeights w = build_weights(cfg.alpha, 4);

  SECTION("zero iterate and constant history stay constant") {
    const double c = 1.7;
    std::vector<Spectrum> hist{to_spectrum(constant_field(cfg.grid, c))};
    const Spectrum p1 = pressure_step(hist, 1, GridField(cfg.grid), cfg, w);
    const GridField p = to_field(p1);
    CHECK(lp_norm(p - constant_field(cfg.grid, c), std::numeric_limits<double>::infinity()) <=
          1e-12);
  }

  SECTION("constant iterate advances the zero mode by the scalar step") {
    const double a = 0.9, c = 0.4, alpha = 0.5;
    std::vector<Spectrum> hist{to_spectrum(constant_field(cfg.grid, c))};
    const Spectrum p1 = pressure_step(hist, 1, constant_field(cfg.grid, a), cfg, w);
    const double expect = c + std::pow(cfg.time.tau, alpha) / gamma_fn(alpha) * a * a;
    CHECK(std::abs(p1.coeff[0].real() - expect) <= 1e-13);
  }

  SECTION("weak form residual vanishes for a random smooth iterate") {
    Xoshiro256 rng(41);
    GridField z(cfg.grid);
    for (std::size_t i = 0; i < z.samples.size(); ++i) {
      const auto idx = cfg.grid.unflatten(i);
      z.samples[i] = 1.0 + 0.4 * std::cos(cfg.grid.spacing() * idx[0]) +
                     0.1 * rng.uniform(-1.0, 1.0);
    }
    std::vector<Spectrum> hist{to_spectrum(constant_field(cfg.grid, 1.0))};
    const Spectrum p1 = pressure_step(hist, 1, z, cfg, w);
    // plug back: (C + |n|^{2s} + eps |n|^2) p - z^2 + C mem must vanish
    const double coeff = gamma_fn(0.5) * std::pow(cfg.time.tau, -0.5);
    const Spectrum zsq = dealias(to_spectrum(pointwise(z, z)));
    double res = 0.0;
    for (std::size_t i = 0; i < p1.coeff.size(); ++i) {
      const double n2 = [&] {
        const auto idx = cfg.grid.unflatten(i);
        double acc = 0.0;
        for (int d = 0; d < cfg.grid.dim; ++d) {
          const double n = cfg.grid.freq(idx[static_cast<std::size_t>(d)]);
          acc += n * n;
        }
        return acc;
      }();
      const double frac = n2 > 0.0 ? std::pow(n2, cfg.s) : 0.0;
      const std::complex<double> mem = -hist[0].coeff[i];
      const std::complex<double> r =
          (coeff + frac + cfg.eps * n2) * p1.coeff[i] - zsq.coeff[i] + coeff * mem;
      res = std::max(res, std::abs(r));
    }
    CHECK(res <= 1e-10);
  }
}

TEST_CASE("density step reductions") {
  SolverConfig cfg{FractionalOrder(0.5), 0.6, TorusGrid(1, 16), TimeGrid(0.125, 4)};
  cfg.rho = 1e-2;
  const CaputoWeights w = build_weights(cfg.alpha, 4);

  SECTION("zero iterate keeps a constant history") {
    const double c = 2.2;
    std::vector<Spectrum> hist{to_spectrum(constant_field(cfg.grid, c))};
    const Spectrum p_hat = to_spectrum(constant_field(cfg.grid, 0.7));
    const Spectrum u1 = density_step(hist, 1, GridField(cfg.grid), p_hat, cfg, w);
    CHECK(lp_norm(to_field(u1) - constant_field(cfg.grid, c),
                  std::numeric_limits<double>::infinity()) <= 1e-12);
  }

  SECTION("constant pressure leaves the memory-only per-mode recursion") {
    // two prior steps with random band-limited content
    Xoshiro256 rng(43);
    GridField u0(cfg.grid), u1(cfg.grid);
    for (std::size_t i = 0; i < u0.samples.size(); ++i) {
      const auto idx = cfg.grid.unflatten(i);
      const double x = cfg.grid.spacing() * idx[0];
      u0.samples[i] = 1.0 + 0.3 * std::cos(x);
      u1.samples[i] = 1.0 + 0.2 * std::cos(x) + 0.1 * std::cos(2 * x);
    }
    std::vector<Spectrum> hist{to_spectrum(u0), to_spectrum(u1)};
    const Spectrum p_hat = to_spectrum(constant_field(cfg.grid, 5.0));
    const Spectrum u2 = density_step(hist, 2, u1, p_hat, cfg, w);

    const double coeff = gamma_fn(0.5) * std::pow(cfg.time.tau, -0.5);
    for (std::size_t i = 0; i < u2.coeff.size(); ++i) {
      const double n2 = [&] {
        const auto idx = cfg.grid.unflatten(i);
        double acc = 0.0;
        for (int d = 0; d < cfg.grid.dim; ++d) {
          const double n = cfg.grid.freq(idx[static_cast<std::size_t>(d)]);
          acc += n * n;
        }
        return acc;
      }();
      // scalar recursion per mode: (C + rho n2) u2 = -C (lambda_2 (u1-u0) - u1)
      const std::complex<double> mem =
          w.lambda(2) * (hist[1].coeff[i] - hist[0].coeff[i]) - hist[1].coeff[i];
      const std::complex<double> expect = -coeff * mem / (coeff + cfg.rho * n2);
      CHECK(std::abs(u2.coeff[i] - expect) <= 1e-12);
    }
  }
}

TEST_CASE("picard iteration") {
  SolverConfig cfg{FractionalOrder(0.5), 0.6, TorusGrid(1, 16), TimeGrid(0.125, 4)};
  cfg.rho = 1e-2;
  cfg.eps = 1e-2;
  const CaputoWeights w = build_weights(cfg.alpha, 4);

  SECTION("zero density converges in one iteration") {
    std::vector<Spectrum> u_hist{to_spectrum(GridField(cfg.grid))};
    std::vector<Spectrum> p_hist{to_spectrum(constant_field(cfg.grid, 1.0))};
    const StepSolution sol =
        picard_solve(u_hist, p_hist, GridField(cfg.grid), 1, cfg, w);
    CHECK(sol.report.picard_iters == 1);
    CHECK(lp_norm(sol.u, std::numeric_limits<double>::infinity()) <= 1e-14);
  }

  SECTION("non-convergence carries the residual history") {
    SolverConfig tight = cfg;
    tight.picard_max = 1;
    tight.picard_tol = 1e-16;
    bool caught = false;
    try {
      run(tight, cosine_bump(cfg.grid, 1.0, 0.5), cosine_bump(cfg.grid, 1.0, 0.3));
    } catch (const NonConvergence& e) {
      caught = true;
      CHECK(e.step == 1);
      CHECK(e.residual_history.size() == 1);
    }
    CHECK(caught);
  }

  SECTION("damping still converges to the same step") {
    SolverConfig damped = cfg;
    damped.picard_damping = 0.7;
    const GridField u0 = cosine_bump(cfg.grid, 1.0, 0.4);
    const GridField p0 = cosine_bump(cfg.grid, 1.0, 0.2);
    const RunResult full = run(cfg, u0, p0);
    const RunResult slow = run(damped, u0, p0);
    CHECK(lp_norm(full.history.u_steps.back() - slow.history.u_steps.back(), 2.0) <=
          1e-8);
  }
}

TEST_CASE("smooth run satisfies the structural postconditions") {
  const SolverConfig cfg = smooth_config();
  const GridField u0 = cosine_bump(cfg.grid, 1.0, 0.5);
  const GridField p0 = cosine_bump(cfg.grid, 1.0, 0.3);
  const RunResult r = run(cfg, u0, p0);
  const Verdicts v = diagnostics(r.history, r.ledger, cfg);

  CHECK(v.mass_ok);
  CHECK(v.max_mass_drift <= 1e-12);
  CHECK(v.energy_ok);
  CHECK(v.positivity_ok);
  CHECK(v.pressure_mean_ok);
  CHECK(r.history.certified);

  // zero mode of the pressure equation: D^a mean(p) = mean(u^2)
  const CaputoWeights w = build_weights(cfg.alpha, cfg.time.n_steps);
  const auto d = left_caputo(ScalarPath{cfg.time, r.ledger.mean_p}, w);
  for (int k = 1; k <= cfg.time.n_steps; ++k) {
    const GridField& uk = r.history.u_steps[static_cast<std::size_t>(k)];
    CHECK(std::abs(d[k] - mean(pointwise(uk, uk))) <= 1e-10);
  }

  // weak-form residuals at the Picard scale
  for (int k = 1; k <= cfg.time.n_steps; ++k) {
    const WeakResiduals wr = weak_form_residuals(r.history, cfg, k);
    CHECK(wr.res_u / wr.picard_scale <= 10.0 * cfg.picard_tol);
    CHECK(wr.res_p / wr.picard_scale <= 10.0 * cfg.picard_tol);
  }
}

TEST_CASE("tightening the Picard tolerance does not loosen the energy slack") {
  SolverConfig loose = smooth_config();
  loose.picard_tol = 1e-4;
  SolverConfig tight = smooth_config();
  tight.picard_tol = 1e-11;
  const GridField u0 = cosine_bump(loose.grid, 1.0, 0.5);
  const GridField p0 = cosine_bump(loose.grid, 1.0, 0.3);

  auto excess = [](const RunResult& r) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.ledger.H.size(); ++k) {
      worst = std::max(worst, (r.ledger.H[k] + r.ledger.S[k]) / r.ledger.H[0] - 1.0);
    }
    return worst;
  };
  const double loose_excess = excess(run(loose, u0, p0));
  const double tight_excess = excess(run(tight, u0, p0));
  CHECK(tight_excess <= std::max(loose_excess, 0.0) + 1e-12);
  CHECK(tight_excess <= 1e-8);
}

TEST_CASE("classical limit matches an independent backward Euler stepper") {
  SolverConfig cfg{FractionalOrder(1.0), 1.0, TorusGrid(1, 32), TimeGrid(1.0 / 16, 16)};
  cfg.rho = 0.0;
  cfg.eps = 0.0;
  cfg.picard_tol = 1e-13;
  const GridField u0 = cosine_bump(cfg.grid, 1.0, 0.5);
  const GridField p0 = cosine_bump(cfg.grid, 1.0, 0.3);
  const RunResult r = run(cfg, u0, p0);
  const auto ref = fracpde_test::backward_euler_reference(cfg.grid, cfg.time.tau,
                                                          cfg.time.n_steps, u0, p0,
                                                          1e-13);
  for (int k = 1; k <= cfg.time.n_steps; ++k) {
    CHECK(lp_norm(r.history.u_steps[static_cast<std::size_t>(k)] -
                      ref.u_steps[static_cast<std::size_t>(k)],
                  std::numeric_limits<double>::infinity()) <= 1e-8);
    CHECK(lp_norm(r.history.p_steps[static_cast<std::size_t>(k)] -
                      ref.p_steps[static_cast<std::size_t>(k)],
                  std::numeric_limits<double>::infinity()) <= 1e-8);
  }
  // ledger-sense energies do not increase in the memory-free limit
  for (std::size_t k = 1; k < r.ledger.H.size(); ++k) {
    CHECK(r.ledger.H[k] + r.ledger.S[k] <= r.ledger.H[0] * (1.0 + 1e-6));
  }
}

TEST_CASE("initial data validation") {
  SolverConfig cfg{FractionalOrder(0.5), 0.75, TorusGrid(1, 16), TimeGrid(0.125, 4)};
  const GridField ok = constant_field(cfg.grid, 1.0);
  CHECK_THROWS_AS(run(cfg, ok, cosine_bump(cfg.grid, 0.0, 1.0)), InvalidInitialData);
  CHECK_THROWS_AS(run(cfg, cosine_bump(cfg.grid, 0.5, 1.0), ok), InvalidInitialData);
  SolverConfig bad = cfg;
  bad.s = 1.5;
  CHECK_THROWS_AS(run(bad, ok, ok), std::invalid_argument);
}

TEST_CASE("ledger CSV shape") {
  SolverConfig cfg{FractionalOrder(0.5), 0.75, TorusGrid(1, 16), TimeGrid(0.125, 4)};
  cfg.rho = cfg.eps = 1e-2;
  const RunResult r = run(cfg, constant_field(cfg.grid, 1.0), constant_field(cfg.grid, 1.0));
  const std::string csv = ledger_csv(r.history, r.ledger, cfg);
  CHECK(csv.rfind("step,t,H,S,mean_u,mean_p,min_u,min_p,l3_accum,picard_iters\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);  // header + 5 rows
}

TEST_CASE("run config parsing and initial field validation") {
  const nlohmann::json j = {
      {"alpha", 0.5},
      {"s", 0.75},
      {"grid", {{"dim", 1}, {"points", 16}}},
      {"time", {{"tau", 0.125}, {"n_steps", 4}}},
      {"rho", 0.01},
      {"eps", 0.01},
      {"u_init", {{"offset", 1.0}, {"modes", {{{"n", {1}}, {"amp", 0.5}}}}}},
      {"p_init", {{"offset", 1.0}, {"modes", {{{"n", {1}}, {"amp", 0.3}}}}}},
  };
  const RunConfig cfg = parse_run_config(j);
  CHECK(cfg.solver.alpha.alpha == 0.5);
  CHECK(cfg.solver.grid.points == 16);
  CHECK(cfg.seed == 42);
  auto [u0, p0] = initial_fields(cfg);
  CHECK(std::abs(mean(u0) - 1.0) <= 1e-14);
  CHECK(min_value(u0) > 0.0);

  nlohmann::json bad = j;
  bad["u_init"]["modes"][0]["amp"] = 2.0;  // offset 1 + amp 2 dips negative
  CHECK_THROWS_AS(initial_fields(parse_run_config(bad)), InvalidInitialData);

  nlohmann::json wrongdim = j;
  wrongdim["u_init"]["modes"][0]["n"] = {1, 1};
  CHECK_THROWS_AS(initial_fields(parse_run_config(wrongdim)), std::invalid_argument);
}

TEST_CASE("refinement studies shrink the level differences") {
  nlohmann::json j = {
      {"alpha", 0.5},
      {"s", 0.75},
      {"grid", {{"dim", 1}, {"points", 16}}},
      {"time", {{"tau", 1.0 / 8}, {"n_steps", 4}}},
      {"rho", 0.01},
      {"eps", 0.01},
      {"u_init", {{"offset", 1.0}, {"modes", {{{"n", {1}}, {"amp", 0.5}}}}}},
      {"p_init", {{"offset", 1.0}, {"modes", {{{"n", {1}}, {"amp", 0.3}}}}}},
  };
  const RunConfig base = parse_run_config(j);
  CHECK_THROWS_AS(run_refinement(base, RefineKnob::tau, 1), std::invalid_argument);

  const RefineReport rep = run_refinement(base, RefineKnob::tau, 4);
  REQUIRE(rep.du.size() == 3);
  CHECK(rep.nonincreasing_tail());
  CHECK(rep.psi.size() == 4);

  const RefineReport eps_rep = run_refinement(base, RefineKnob::eps, 3);
  CHECK(eps_rep.nonincreasing_tail());

  const std::string csv = refine_csv(rep);
  CHECK(csv.rfind("pair,knob_coarse,knob_fine,du_l2,dp_l2\n", 0) == 0);
}

TEST_CASE("solver verification suite is green") {
  for (const auto& c : verify_solver()) {
    INFO(c.name << " value=" << c.value << " threshold=" << c.threshold);
    CHECK(c.pass);
  }
}
