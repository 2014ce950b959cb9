// Acceptance suite: one pass/fail line per criterion, every tolerance
// pinned in code. Exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "backward_euler_ref.hpp"
#include "fracpde/caputo.hpp"
#include "fracpde/compactness.hpp"
#include "fracpde/config.hpp"
#include "fracpde/oracle.hpp"
#include "fracpde/refine.hpp"
#include "fracpde/rng.hpp"
#include "fracpde/solver.hpp"
#include "fracpde/torus.hpp"
#include "fracpde/weights.hpp"

using namespace fracpde;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
int g_failures = 0;

void report(int number, const std::string& what, bool pass, double seconds,
            double limit_seconds = 0.0) {
  const bool in_budget = limit_seconds <= 0.0 || seconds <= limit_seconds;
  if (!pass || !in_budget) ++g_failures;
  std::printf("%s criterion %2d: %s (%.1f s%s)\n",
              pass && in_budget ? "PASS" : "FAIL", number, what.c_str(), seconds,
              !in_budget ? ", over budget" : "");
  std::fflush(stdout);
}

template <class F>
double timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

ScalarPath random_path(Xoshiro256& rng, const TimeGrid& grid, double lo = -1.0,
                       double hi = 1.0) {
  std::vector<double> vals(static_cast<std::size_t>(grid.n_steps) + 1);
  for (auto& v : vals) v = rng.uniform(lo, hi);
  return {grid, std::move(vals)};
}

GridField cosine_bump(const TorusGrid& g, double offset, double amp) {
  GridField f(g);
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const auto idx = g.unflatten(i);
    f.samples[i] = offset + amp * std::cos(g.spacing() * idx[0]);
  }
  return f;
}

// 1. weight identity / monotonicity / decay at N = 10^4 across orders
void criterion_1() {
  bool pass = true;
  const double secs = timed([&] {
    for (double a : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const CaputoWeights w = build_weights(FractionalOrder(a), 10000);
      pass = pass && weight_identity_max_error(w) <= 1e-10;
      pass = pass && weights_strictly_decreasing(w);
      pass = pass && weights_decay_bounds_hold(w);
    }
  });
  report(1, "lambda identity, monotonicity, decay (N=10^4, 5 orders)", pass,
         secs, 30.0);
}

// 2. alpha = 1 degeneracy, bitwise
void criterion_2() {
  bool pass = true;
  const double secs = timed([&] {
    Xoshiro256 rng(42);
    const TimeGrid grid(1.0 / 128, 128);
    const CaputoWeights w = build_weights(FractionalOrder(1.0), 128);
    for (int rep = 0; rep < 50; ++rep) {
      const ScalarPath f = random_path(rng, grid);
      const auto l = left_caputo(f, w);
      for (int k = 1; k <= 128; ++k) {
        pass = pass && l[k] == (f[k] - f[k - 1]) / grid.tau;
      }
    }
  });
  report(2, "alpha=1 equals backward difference bitwise (N=128)", pass, secs);
}

// 3. FTC round trips, 1000 paths, N = 64, both directions
void criterion_3() {
  bool pass = true;
  const double secs = timed([&] {
    Xoshiro256 rng(42);
    const TimeGrid grid(1.0 / 64, 64);
    const CaputoWeights w = build_weights(FractionalOrder(0.7), 64);
    for (int rep = 0; rep < 1000 && pass; ++rep) {
      const ScalarPath f = random_path(rng, grid, 0.5, 2.0);
      const auto fwd = ftc_reconstruct_forward(left_caputo(f, w), f[0], w);
      const auto bwd = ftc_reconstruct_backward(right_caputo(f, w), f[64], w);
      for (int k = 0; k <= 64; ++k) {
        pass = pass && std::abs(fwd[k] - f[k]) <= 1e-12 * std::abs(f[k]);
        pass = pass && std::abs(bwd[k] - f[k]) <= 1e-12 * std::abs(f[k]);
      }
    }
  });
  report(3, "discrete FTC round trips, both directions (1000 paths)", pass, secs);
}

// 4. discrete integration-by-parts residual on 100 random instances
void criterion_4() {
  bool pass = true;
  const double secs = timed([&] {
    Xoshiro256 rng(42);
    const TimeGrid grid(1.0 / 16, 16);
    const CaputoWeights w = build_weights(FractionalOrder(0.6), 16);
    for (int rep = 0; rep < 100 && pass; ++rep) {
      const ScalarPath f = random_path(rng, grid);
      const double c0 = rng.uniform(-1.0, 1.0);
      const double c1 = rng.uniform(-1.0, 1.0);
      const double c2 = rng.uniform(-1.0, 1.0);
      auto phi = [=](double t) { return c0 + c1 * t + c2 * std::cos(t); };
      pass = pass && discrete_ibp_residual<double>(f, phi, w) <= 1e-10;
    }
  });
  report(4, "discrete integration-by-parts residual (100 instances)", pass, secs);
}

// 5. discrete -> continuous Caputo, strictly decreasing max error
void criterion_5() {
  bool pass = true;
  const double secs = timed([&] {
    const SmoothFunction lin{[](double t) { return t; }, [](double) { return 1.0; }};
    const SmoothFunction sq{[](double t) { return t * t; },
                            [](double t) { return 2.0 * t; }};
    for (double alpha : {0.3, 0.5, 0.8}) {
      for (const auto& fn : {lin, sq}) {
        double prev = kInf;
        for (int nn : {16, 32, 64, 128}) {
          const TimeGrid grid(1.0 / nn, nn);
          const CaputoWeights w = build_weights(FractionalOrder(alpha), nn);
          const auto d = left_caputo(sample_scalar(grid, fn.f), w);
          OracleOptions opt;
          opt.cells = 64;
          double worst = 0.0;
          for (int k = 1; k <= nn; ++k) {
            worst = std::max(
                worst, std::abs(d[k] - continuous_left_caputo(fn, grid.t(k), alpha, opt)));
          }
          pass = pass && worst < prev;
          prev = worst;
        }
      }
    }
  });
  report(5, "discrete Caputo converges to the quadrature oracle", pass, secs);
}

// 6. shift estimates and mu scan
void criterion_6() {
  bool pass = true;
  const double secs = timed([&] {
    Xoshiro256 rng(42);
    const TimeGrid grid64(1.0 / 64, 64);
    for (double alpha : {0.25, 0.5, 0.75}) {
      const CaputoWeights w = build_weights(FractionalOrder(alpha), 64);
      for (int rep = 0; rep < 1000 / 3 + 1 && pass; ++rep) {
        const ScalarPath f = random_path(rng, grid64);
        for (double p : {1.0, 2.0, kInf}) {
          pass = pass && piecewise_shift_check(f, w, p).ratio <= 1.0 + 1e-9;
        }
      }
    }
    const TimeGrid grid16(1.0 / 16, 16);
    for (int rep = 0; rep < 1000 && pass; ++rep) {
      const LinearInterpolant interp(random_path(rng, grid16));
      for (double p : {1.0, 2.0, kInf}) {
        pass = pass &&
               interpolant_shift_check(interp, 0.5, grid16.tau, p).ratio <= 1.0 + 1e-9;
      }
    }
    for (double alpha : {0.25, 0.5, 0.75}) {
      const double env = mu_scan_envelope(alpha);
      for (int n : {8, 32, 128}) {
        pass = pass && mu_coefficient_scan(alpha, n) <= env;
      }
    }
  });
  report(6, "shift estimates (1000 paths, p in {1,2,inf}) and mu scan", pass, secs);
}

// 7. spectral unit identities
void criterion_7() {
  bool pass = true;
  const double secs = timed([&] {
    Xoshiro256 rng(42);
    const TorusGrid g(1, 64);
    GridField cos1(g), cos3(g);
    for (std::size_t i = 0; i < cos1.samples.size(); ++i) {
      cos1.samples[i] = std::cos(g.spacing() * static_cast<double>(i));
      cos3.samples[i] = std::cos(3.0 * g.spacing() * static_cast<double>(i));
    }
    for (double s : {0.25, 0.5, 0.75, 1.0}) {
      pass = pass && lp_norm(frac_laplacian(cos1, s) - cos1, kInf) <= 1e-12;
      const double mult = std::pow(9.0, s);
      pass = pass && lp_norm(frac_laplacian(cos3, s) - mult * cos3, kInf) <= 1e-12;
    }
    for (int dim : {1, 2, 3}) {
      const TorusGrid gd(dim, dim == 3 ? 16 : 32);
      GridField f(gd);
      Xoshiro256 local(7 + static_cast<std::uint64_t>(dim));
      for (int m = 0; m < 4; ++m) {
        const int n1 = static_cast<int>(local.uniform(0.0, gd.points / 3 + 1.0));
        const double amp = local.uniform(-1.0, 1.0);
        const double ph = local.uniform(0.0, 2.0 * std::numbers::pi);
        for (std::size_t i = 0; i < f.samples.size(); ++i) {
          const auto idx = gd.unflatten(i);
          f.samples[i] += amp * std::cos(n1 * gd.spacing() * idx[0] + ph);
        }
      }
      const Spectrum sp = to_spectrum(f);
      double sum = 0.0;
      for (const auto& c : sp.coeff) sum += std::norm(c);
      const double l2 = lp_norm(f, 2.0);
      pass = pass && std::abs(l2 * l2 - gd.volume() * sum) <= 1e-10 * std::max(1.0, l2 * l2);
      const double scale = std::max(1.0, lp_norm(laplacian(f), kInf));
      pass = pass &&
             lp_norm(frac_laplacian(f, 1.0) - (-1.0 * laplacian(f)), kInf) <= 1e-12 * scale;
    }
  });
  report(7, "spectral suite: eigenfunctions, Parseval, s=1 limit", pass, secs);
}

// 8. solver structural suite at the stated resolution
void criterion_8() {
  bool pass = true;
  const double secs = timed([&] {
    SolverConfig cfg{FractionalOrder(0.5), 0.75, TorusGrid(1, 64), TimeGrid(1.0 / 64, 32)};
    cfg.rho = 1e-2;
    cfg.eps = 1e-2;
    const RunResult r =
        run(cfg, cosine_bump(cfg.grid, 1.0, 0.5), cosine_bump(cfg.grid, 1.0, 0.3));
    const Verdicts v = diagnostics(r.history, r.ledger, cfg);
    pass = v.mass_ok && v.max_mass_drift <= 1e-12 && v.energy_ok &&
           v.max_energy_excess <= 1e-6 && v.positivity_ok &&
           v.min_field_value >= -1e-8 && v.pressure_mean_ok;
  });
  report(8, "solver structural suite (d=1, M=64, T=0.5)", pass, secs, 20.0);
}

// 9. classical-limit cross-check against an independent stepper
void criterion_9() {
  bool pass = true;
  const double secs = timed([&] {
    SolverConfig cfg{FractionalOrder(1.0), 1.0, TorusGrid(1, 64), TimeGrid(1.0 / 64, 64)};
    cfg.rho = 0.0;
    cfg.eps = 0.0;
    cfg.picard_tol = 1e-13;
    const GridField u0 = cosine_bump(cfg.grid, 1.0, 0.5);
    const GridField p0 = cosine_bump(cfg.grid, 1.0, 0.3);
    const RunResult r = run(cfg, u0, p0);
    const auto ref = fracpde_test::backward_euler_reference(
        cfg.grid, cfg.time.tau, cfg.time.n_steps, u0, p0, 1e-13);
    for (int k = 1; k <= cfg.time.n_steps; ++k) {
      pass = pass && lp_norm(r.history.u_steps[static_cast<std::size_t>(k)] -
                                 ref.u_steps[static_cast<std::size_t>(k)],
                             kInf) <= 1e-8;
      pass = pass && lp_norm(r.history.p_steps[static_cast<std::size_t>(k)] -
                                 ref.p_steps[static_cast<std::size_t>(k)],
                             kInf) <= 1e-8;
    }
  });
  report(9, "alpha=1, s=1 run matches independent backward Euler (N=64)", pass, secs);
}

RunConfig refine_base() {
  RunConfig cfg{SolverConfig{FractionalOrder(0.5), 0.75, TorusGrid(1, 64),
                             TimeGrid(1.0 / 16, 8)},
                CosineSeries{1.0, {{{1}, 0.5}}},
                CosineSeries{1.0, {{{1}, 0.3}}}};
  cfg.solver.rho = 1e-2;
  cfg.solver.eps = 1e-2;
  return cfg;
}

// 10. refinement studies for tau, eps, rho
void criterion_10() {
  bool pass = true;
  const double secs = timed([&] {
    pass = pass && run_refinement(refine_base(), RefineKnob::tau, 4).nonincreasing_tail();
    RunConfig base = refine_base();
    base.solver.time = TimeGrid(1.0 / 32, 16);
    pass = pass && run_refinement(base, RefineKnob::eps, 4).nonincreasing_tail();
    pass = pass && run_refinement(base, RefineKnob::rho, 4).nonincreasing_tail();
  });
  report(10, "refinement studies non-increasing for tau, eps, rho", pass, secs, 180.0);
}

// 11. L^3(0,T;L^3) accumulator stable between M = 32 and M = 64 for s = 0.6
void criterion_11() {
  bool pass = true;
  const double secs = timed([&] {
    double l3[2] = {0.0, 0.0};
    int slot = 0;
    for (int m : {32, 64}) {
      SolverConfig cfg{FractionalOrder(0.5), 0.6, TorusGrid(1, m), TimeGrid(1.0 / 64, 32)};
      cfg.rho = 1e-2;
      cfg.eps = 1e-2;
      const RunResult r =
          run(cfg, cosine_bump(cfg.grid, 1.0, 0.5), cosine_bump(cfg.grid, 1.0, 0.3));
      l3[slot++] = r.ledger.l3_accum.back();
    }
    pass = std::abs(l3[1] - l3[0]) / l3[0] < 0.05;
  });
  report(11, "L3 accumulator changes < 5% between M=32 and M=64 (s=0.6)", pass, secs);
}

// 12. d = 3 smoke test
void criterion_12() {
  bool pass = true;
  const double secs = timed([&] {
    SolverConfig cfg{FractionalOrder(0.5), 0.75, TorusGrid(3, 16), TimeGrid(1.0 / 32, 16)};
    cfg.rho = 1e-2;
    cfg.eps = 1e-2;
    const RunResult r =
        run(cfg, cosine_bump(cfg.grid, 1.0, 0.5), cosine_bump(cfg.grid, 1.0, 0.3));
    const Verdicts v = diagnostics(r.history, r.ledger, cfg);
    pass = v.all_ok() && v.min_field_value >= -1e-8;
  });
  report(12, "d=3 smoke run (M=16, N=16) with passing verdicts", pass, secs, 60.0);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria failed\n", g_failures);
  return 1;
}
