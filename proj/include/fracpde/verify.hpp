// Named verification suites behind the `verify` subcommand. Each check
// captures a lemma/identity of the discrete calculus, the compactness
// estimates, the spectral operators or the solver structure, and reports
// the measured value against its threshold.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fracpde/caputo.hpp"
#include "fracpde/compactness.hpp"
#include "fracpde/oracle.hpp"
#include "fracpde/rng.hpp"
#include "fracpde/solver.hpp"
#include "fracpde/torus.hpp"
#include "fracpde/weights.hpp"

namespace fracpde {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // limit it was compared against
};

using CheckList = std::vector<Check>;

namespace detail {
inline void check_le(CheckList& out, const std::string& name, double value,
                     double threshold) {
  out.push_back({name, value <= threshold, value, threshold});
}

inline void check_true(CheckList& out, const std::string& name, bool ok) {
  out.push_back({name, ok, ok ? 1.0 : 0.0, 1.0});
}

inline ScalarPath random_path(Xoshiro256& rng, const TimeGrid& grid,
                              double lo = -1.0, double hi = 1.0) {
  std::vector<double> vals(static_cast<std::size_t>(grid.n_steps) + 1);
  for (auto& v : vals) v = rng.uniform(lo, hi);
  return {grid, std::move(vals)};
}

inline GridField random_bandlimited_field(Xoshiro256& rng, const TorusGrid& g) {
  // random low-mode cosine/sine mixture, band |n_i| <= M/3
  GridField f(g);
  const int nmax = g.points / 3;
  const double h = g.spacing();
  const int modes = 4;
  for (int m = 0; m < modes; ++m) {
    std::array<int, 3> n = {0, 0, 0};
    for (int d = 0; d < g.dim; ++d) {
      n[static_cast<std::size_t>(d)] =
          static_cast<int>(rng.uniform(0.0, nmax + 1.0));
    }
    const double amp = rng.uniform(-1.0, 1.0);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (std::size_t flat = 0; flat < f.samples.size(); ++flat) {
      const auto idx = g.unflatten(flat);
      double arg = phase;
      for (int d = 0; d < g.dim; ++d) {
        arg += n[static_cast<std::size_t>(d)] * h * idx[static_cast<std::size_t>(d)];
      }
      f.samples[flat] += amp * std::cos(arg);
    }
  }
  return f;
}
}  // namespace detail

// ---- weights ----------------------------------------------------------

inline CheckList verify_weights(std::uint64_t /*seed*/ = 42) {
  CheckList out;
  for (double a : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const CaputoWeights w = build_weights(FractionalOrder(a), 10000);
    const std::string tag = "weights.alpha=" + std::to_string(a).substr(0, 4);
    detail::check_le(out, tag + ".identity", weight_identity_max_error(w), 1e-10);
    detail::check_true(out, tag + ".decreasing", weights_strictly_decreasing(w));
    detail::check_true(out, tag + ".decay_bounds", weights_decay_bounds_hold(w));
  }
  const CaputoWeights w1 = build_weights(FractionalOrder(1.0), 5);
  bool degenerate = w1.lambda(1) == 1.0;
  for (int k = 2; k <= 5; ++k) degenerate = degenerate && w1.lambda(k) == 0.0;
  detail::check_true(out, "weights.alpha=1.exact", degenerate);
  const CaputoWeights wh = build_weights(FractionalOrder(0.5), 2);
  detail::check_le(out, "weights.lambda2.closed_form",
                   std::abs(wh.lambda(2) - (1.0 - std::pow(2.0, -0.5))), 1e-15);
  return out;
}

// ---- caputo operators ---------------------------------------------------

inline CheckList verify_caputo(std::uint64_t seed = 42) {
  CheckList out;
  Xoshiro256 rng(seed);

  {  // constant paths annihilated
    const TimeGrid grid(0.1, 12);
    const CaputoWeights w = build_weights(FractionalOrder(0.6), 12);
    const ScalarPath c = sample_scalar(grid, [](double) { return 3.25; });
    double worst = 0.0;
    const auto l = left_caputo(c, w), r = right_caputo(c, w);
    for (int k = 0; k <= 12; ++k) worst = std::max({worst, std::abs(l[k]), std::abs(r[k])});
    detail::check_le(out, "caputo.constant_path_zero", worst, 1e-14);
  }

  {  // alpha = 1: backward/forward difference, bitwise
    const TimeGrid grid(1.0 / 128, 128);
    const CaputoWeights w = build_weights(FractionalOrder(1.0), 128);
    const ScalarPath f = detail::random_path(rng, grid);
    const auto l = left_caputo(f, w), r = right_caputo(f, w);
    bool exact = true;
    for (int k = 1; k <= 128; ++k) exact = exact && l[k] == (f[k] - f[k - 1]) / grid.tau;
    for (int k = 0; k < 128; ++k) exact = exact && r[k] == (f[k + 1] - f[k]) / grid.tau;
    detail::check_true(out, "caputo.alpha1_bitwise_difference", exact);
  }

  {  // linearity
    const TimeGrid grid(0.05, 32);
    const CaputoWeights w = build_weights(FractionalOrder(0.4), 32);
    const ScalarPath f = detail::random_path(rng, grid);
    const ScalarPath g = detail::random_path(rng, grid);
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    std::vector<double> combo(static_cast<std::size_t>(grid.n_steps) + 1);
    for (int k = 0; k <= 32; ++k) combo[static_cast<std::size_t>(k)] = a * f[k] + b * g[k];
    const auto lc = left_caputo(ScalarPath{grid, combo}, w);
    const auto lf = left_caputo(f, w), lg = left_caputo(g, w);
    double worst = 0.0;
    for (int k = 0; k <= 32; ++k) worst = std::max(worst, std::abs(lc[k] - a * lf[k] - b * lg[k]));
    detail::check_le(out, "caputo.linearity", worst, 1e-11);
  }

  {  // time-reversal identity, brute force
    const TimeGrid grid(0.25, 16);
    const CaputoWeights w = build_weights(FractionalOrder(0.7), 16);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      const ScalarPath f = detail::random_path(rng, grid);
      std::vector<double> rev(f.values.rbegin(), f.values.rend());
      const auto r = right_caputo(f, w);
      const auto lrev = left_caputo(ScalarPath{grid, rev}, w);
      for (int k = 0; k <= 16; ++k) worst = std::max(worst, std::abs(r[k] + lrev[16 - k]));
    }
    detail::check_le(out, "caputo.reversal_identity", worst, 1e-12);
  }

  {  // FTC round trips
    const TimeGrid grid(1.0 / 64, 64);
    const CaputoWeights w = build_weights(FractionalOrder(0.7), 64);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      const ScalarPath f = detail::random_path(rng, grid, 0.5, 2.0);
      const auto rec = ftc_reconstruct_forward(left_caputo(f, w), f[0], w);
      const auto recb = ftc_reconstruct_backward(right_caputo(f, w), f[64], w);
      for (int k = 0; k <= 64; ++k) {
        worst = std::max(worst, std::abs(rec[k] - f[k]) / std::abs(f[k]));
        worst = std::max(worst, std::abs(recb[k] - f[k]) / std::abs(f[k]));
      }
    }
    detail::check_le(out, "caputo.ftc_round_trips", worst, 1e-12);
  }

  {  // constant-derivative closed form
    const TimeGrid grid(0.125, 24);
    const CaputoWeights w = build_weights(FractionalOrder(0.55), 24);
    const double a = 1.7, f0 = 0.3;
    const ScalarPath df = sample_scalar(grid, [&](double) { return a; });
    const auto f = ftc_reconstruct_forward(df, f0, w);
    double worst = 0.0;
    const double coeff = std::pow(grid.tau, 0.55) / gamma_fn(0.55);
    for (int n = 1; n <= 24; ++n) {
      double s = 0.0;
      for (int k = 1; k <= n; ++k) s += std::pow(static_cast<double>(k), 0.55 - 1.0);
      worst = std::max(worst, std::abs(f[n] - (f0 + coeff * a * s)));
    }
    detail::check_le(out, "caputo.ftc_constant_source", worst, 1e-13);
  }

  {  // non-positive derivative data keeps the path below its start
    const TimeGrid grid(0.1, 32);
    const CaputoWeights w = build_weights(FractionalOrder(0.45), 32);
    double worst = -std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 100; ++rep) {
      const ScalarPath df = detail::random_path(rng, grid, -1.0, 0.0);
      const auto f = ftc_reconstruct_forward(df, 1.0, w);
      for (int k = 1; k <= 32; ++k) worst = std::max(worst, f[k] - f[0]);
    }
    detail::check_le(out, "caputo.nonpositive_derivative_bound", worst, 1e-12);
  }

  {  // convexity gap
    const TimeGrid grid(1.0 / 64, 64);
    double worst = 0.0;
    for (double a : {0.3, 0.7}) {
      const CaputoWeights w = build_weights(FractionalOrder(a), 64);
      for (int rep = 0; rep < 50; ++rep) {
        const ScalarPath f = detail::random_path(rng, grid);
        for (int k = 1; k <= 64; ++k) {
          worst = std::max(worst, -caputo_square_gap(f, w, k));
        }
      }
    }
    detail::check_le(out, "caputo.square_gap_nonnegative", worst, 1e-12);
    const CaputoWeights w1 = build_weights(FractionalOrder(1.0), 8);
    const TimeGrid g8(0.125, 8);
    const ScalarPath f = detail::random_path(rng, g8);
    double diff = 0.0;
    for (int k = 1; k <= 8; ++k) {
      const double expect = (f[k] - f[k - 1]) * (f[k] - f[k - 1]) / (2.0 * g8.tau);
      diff = std::max(diff, std::abs(caputo_square_gap(f, w1, k) - expect));
    }
    detail::check_le(out, "caputo.square_gap_alpha1_form", diff, 1e-12);
  }

  {  // weight density: pointwise bound and kernel limit
    const double alpha = 0.5, T = 1.0;
    bool bound_ok = true;
    double first_cell = 0.0;
    std::vector<double> errs;
    for (int nn : {32, 64, 128}) {
      const double tau = T / nn;
      const CaputoWeights w = build_weights(FractionalOrder(alpha), nn);
      for (int j = 1; j <= nn; ++j) {
        // tightest point of lambda^{(tau)}(t) <= t^{-a} is the right cell edge
        const double t = j * tau;
        if (weight_density(w, tau, t) > std::pow(t, -alpha) * (1.0 + 1e-12)) {
          bound_ok = false;
        }
      }
      if (nn == 32) first_cell = weight_density(w, tau, 0.5 * tau);
      // exact cell sums against the graded-quadrature kernel integral
      double lhs = 0.0;
      for (int j = 1; j <= nn; ++j) {
        lhs += std::pow(tau, -alpha) * w.lambda(j) *
               (std::sin(j * tau) - std::sin((j - 1) * tau));
      }
      auto psi = [&](double t) { return std::pow(t, -alpha) * std::cos(t); };
      const double rhs = integrate_graded(psi, T, 8.0 / (1.0 - alpha), 256) /
                         (gamma_fn(alpha) * gamma_fn(1.0 - alpha));
      errs.push_back(std::abs(lhs - rhs));
    }
    detail::check_true(out, "density.pointwise_bound", bound_ok);
    detail::check_le(out, "density.first_cell_value",
                     std::abs(first_cell - std::pow(T / 32, -alpha)), 1e-12);
    detail::check_true(out, "density.kernel_limit_monotone",
                       errs[1] < errs[0] && errs[2] < errs[1]);
  }

  {  // discrete -> continuous consistency on smooth samples
    bool monotone = true;
    for (double alpha : {0.3, 0.5, 0.8}) {
      for (int variant = 0; variant < 2; ++variant) {
        const SmoothFunction fn =
            variant == 0
                ? SmoothFunction{[](double t) { return t; }, [](double) { return 1.0; }}
                : SmoothFunction{[](double t) { return t * t; },
                                 [](double t) { return 2.0 * t; }};
        double prev = std::numeric_limits<double>::infinity();
        for (int nn : {16, 32, 64, 128}) {
          const TimeGrid grid(1.0 / nn, nn);
          const CaputoWeights w = build_weights(FractionalOrder(alpha), nn);
          const auto d = left_caputo(sample_scalar(grid, fn.f), w);
          OracleOptions opt;
          opt.cells = 64;
          double worst = 0.0;
          for (int k = 1; k <= nn; ++k) {
            worst = std::max(worst,
                             std::abs(d[k] - continuous_left_caputo(fn, grid.t(k), alpha, opt)));
          }
          if (worst >= prev) monotone = false;
          prev = worst;
        }
      }
    }
    detail::check_true(out, "caputo.oracle_consistency_monotone", monotone);
  }

  return out;
}

// ---- integration by parts ----------------------------------------------

inline CheckList verify_ibp(std::uint64_t seed = 42) {
  CheckList out;
  Xoshiro256 rng(seed);

  {  // discrete identity
    const TimeGrid grid(1.0 / 16, 16);
    const CaputoWeights w = build_weights(FractionalOrder(0.6), 16);
    const ScalarPath c = sample_scalar(grid, [](double) { return 2.0; });
    detail::check_le(out, "ibp.discrete_constant",
                     discrete_ibp_residual<double>(c, [](double t) { return std::cos(t); }, w),
                     1e-12);
    double worst1 = 0.0, worstt = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      const ScalarPath f = detail::random_path(rng, grid);
      worst1 = std::max(worst1, discrete_ibp_residual<double>(
                                    f, [](double) { return 1.0; }, w));
      worstt = std::max(worstt, discrete_ibp_residual<double>(
                                    f, [](double t) { return t; }, w));
    }
    detail::check_le(out, "ibp.discrete_random_phi_const", worst1, 1e-10);
    detail::check_le(out, "ibp.discrete_random_phi_linear", worstt, 1e-10);
  }

  {  // continuous identity residuals
    const double T = 1.0, alpha = 0.6;
    const SmoothFunction cf{[](double) { return 1.5; }, [](double) { return 0.0; }};
    const SmoothFunction lin{[](double t) { return t; }, [](double) { return 1.0; }};
    detail::check_le(out, "ibp.continuous_const_const",
                     ibp_continuous_residual(cf, cf, alpha, T), 1e-8);
    detail::check_le(out, "ibp.continuous_linear_const",
                     ibp_continuous_residual(lin, cf, alpha, T), 1e-5);
    detail::check_le(out, "ibp.continuous_linear_linear",
                     ibp_continuous_residual(lin, lin, alpha, T), 1e-5);
  }

  {  // the three discrete terms approach the three continuous terms
    const double T = 1.0, alpha = 0.5;
    const SmoothFunction f{[](double t) { return std::sin(t); },
                           [](double t) { return std::cos(t); }};
    const SmoothFunction phi{[](double t) { return std::cos(t); },
                             [](double t) { return -std::sin(t); }};
    OracleOptions opt;
    opt.cells = 128;
    auto term1_c = [&]() {
      auto psi = [&](double z) {
        return z > 0.0 && z < T
                   ? f.f(T - z) * continuous_right_caputo(phi, T - z, alpha, T, opt)
                   : 0.0;
      };
      return -integrate_graded(psi, T, 8.0 / (1.0 - alpha), 128);
    }();
    auto term2_c = [&]() {
      auto psi = [&](double z) { return f.f(T - z) * std::pow(z, -alpha); };
      return phi.f(T) / gamma_fn(1.0 - alpha) *
             integrate_graded(psi, T, 8.0 / (1.0 - alpha), 256);
    }();
    auto term3_c = [&]() {
      auto psi = [&](double s) { return phi.f(s) * std::pow(s, -alpha); };
      return f.f(0.0) / gamma_fn(1.0 - alpha) *
             integrate_graded(psi, T, 8.0 / (1.0 - alpha), 256);
    }();
    double e1 = 0.0, e2 = 0.0, e3 = 0.0;
    for (int nn : {16, 32, 64, 128}) {
      const TimeGrid grid(T / nn, nn);
      const CaputoWeights w = build_weights(FractionalOrder(alpha), nn);
      const ScalarPath fs = sample_scalar(grid, f.f);
      std::vector<double> cell(static_cast<std::size_t>(nn) + 1, 0.0);
      for (int k = 1; k <= nn; ++k) cell[static_cast<std::size_t>(k)] = gauss8(phi.f, (k - 1) * grid.tau, k * grid.tau);
      const double coeff = gamma_fn(alpha) * std::pow(grid.tau, -alpha);
      double t1 = 0.0;
      for (int k = 1; k <= nn - 1; ++k) {
        double s = 0.0;
        for (int j = k + 1; j <= nn; ++j) {
          s += w.lambda(j - k) * (cell[static_cast<std::size_t>(j) - 1] -
                                  cell[static_cast<std::size_t>(j)]);
        }
        t1 += coeff * s * fs[k];
      }
      double boundary = 0.0;
      for (int j = 1; j <= nn; ++j) boundary += w.lambda(nn - j + 1) * fs[j];
      const double t2 = coeff * cell[static_cast<std::size_t>(nn)] * boundary;
      double phiw = 0.0;
      for (int k = 1; k <= nn; ++k) phiw += w.lambda(k) * cell[static_cast<std::size_t>(k)];
      const double t3 = coeff * fs[0] * phiw;
      e1 = std::abs(t1 - term1_c) / std::abs(term1_c);
      e2 = std::abs(t2 - term2_c) / std::abs(term2_c);
      e3 = std::abs(t3 - term3_c) / std::abs(term3_c);
    }
    detail::check_le(out, "ibp.term1_relative_gap", e1, 0.05);
    detail::check_le(out, "ibp.term2_relative_gap", e2, 0.05);
    detail::check_le(out, "ibp.term3_relative_gap", e3, 0.05);
  }

  return out;
}

// ---- compactness --------------------------------------------------------

inline CheckList verify_compactness(std::uint64_t seed = 42) {
  CheckList out;
  Xoshiro256 rng(seed);
  const double inf = std::numeric_limits<double>::infinity();

  {  // piecewise tau-jump ratios
    double worst = 0.0;
    for (double alpha : {0.25, 0.5, 0.75}) {
      for (int nn : {16, 64}) {
        const TimeGrid grid(1.0 / nn, nn);
        const CaputoWeights w = build_weights(FractionalOrder(alpha), nn);
        for (int rep = 0; rep < 70; ++rep) {
          const ScalarPath f = detail::random_path(rng, grid);
          for (double p : {1.0, 2.0, inf}) {
            worst = std::max(worst, piecewise_shift_check(f, w, p).ratio);
          }
        }
      }
    }
    detail::check_le(out, "shift.piecewise_ratio", worst, 1.0 + 1e-9);

    const TimeGrid grid(0.125, 16);
    const CaputoWeights w1 = build_weights(FractionalOrder(1.0), 16);
    const ScalarPath f = detail::random_path(rng, grid);
    detail::check_le(out, "shift.piecewise_alpha1_p1",
                     piecewise_shift_check(f, w1, 1.0).ratio, 1.0 + 1e-9);
    const ScalarPath c = sample_scalar(grid, [](double) { return 4.0; });
    const auto rep = piecewise_shift_check(c, build_weights(FractionalOrder(0.5), 16), 2.0);
    detail::check_le(out, "shift.piecewise_constant_zero",
                     std::abs(rep.shift_norm) + std::abs(rep.ratio), 0.0);
  }

  {  // interpolant ratios
    double worst = 0.0;
    const TimeGrid grid(1.0 / 16, 16);
    for (int rep = 0; rep < 40; ++rep) {
      const LinearInterpolant interp(detail::random_path(rng, grid));
      for (double h : {grid.tau / 2, grid.tau, 2 * grid.tau}) {
        for (double p : {1.0, inf}) {
          worst = std::max(worst, interpolant_shift_check(interp, 0.5, h, p).ratio);
        }
      }
    }
    detail::check_le(out, "shift.interpolant_ratio", worst, 1.0 + 1e-9);
    const LinearInterpolant lin(sample_scalar(grid, [](double t) { return t; }));
    detail::check_le(out, "shift.interpolant_linear_f",
                     interpolant_shift_check(lin, 0.5, 0.1, inf).ratio, 1.0 + 1e-9);
  }

  {  // interpolant Caputo closed form vs quadrature oracle
    const TimeGrid grid(0.125, 8);
    const ScalarPath f = detail::random_path(rng, grid);
    const LinearInterpolant interp(f);
    SmoothFunction fn{[&](double t) { return interp.eval(t); },
                      [&](double t) {
                        const int cell = std::min(static_cast<int>(t / grid.tau), 7);
                        return (f[cell + 1] - f[cell]) / grid.tau;
                      }};
    OracleOptions opt;
    for (int n = 1; n <= 8; ++n) opt.breakpoints.push_back(n * grid.tau);
    double worst = 0.0;
    for (double t : {0.3, 0.55, 0.83, 0.97}) {
      worst = std::max(worst, std::abs(interpolant_caputo(interp, 0.6, t) -
                                       continuous_left_caputo(fn, t, 0.6, opt)));
    }
    detail::check_le(out, "interpolant.caputo_vs_quadrature", worst, 1e-8);

    // single jump: D^a of the interpolant on the first cell
    std::vector<double> jump(9, 1.0);
    jump[0] = 0.0;
    const LinearInterpolant ji(ScalarPath{grid, jump});
    double jworst = 0.0;
    for (double t : {0.02, 0.06, 0.11}) {
      const double expect = std::pow(t, 1.0 - 0.6) / (grid.tau * gamma_fn(2.0 - 0.6));
      jworst = std::max(jworst, std::abs(interpolant_caputo(ji, 0.6, t) - expect));
    }
    detail::check_le(out, "interpolant.single_jump_closed_form", jworst, 1e-12);

    bool nodes_exact = true;
    for (int k = 0; k <= 8; ++k) nodes_exact = nodes_exact && interp.eval(grid.t(k)) == f[k];
    detail::check_true(out, "interpolant.matches_nodes", nodes_exact);
  }

  {  // mu_k scans
    const double alpha = 0.5;
    const double envelope = mu_scan_envelope(alpha);
    double m8 = 0.0, m32 = 0.0, m128 = 0.0;
    m8 = mu_coefficient_scan(alpha, 8);
    m32 = mu_coefficient_scan(alpha, 32);
    m128 = mu_coefficient_scan(alpha, 128);
    detail::check_le(out, "mu.scan_n8", m8, envelope);
    detail::check_le(out, "mu.scan_n32", m32, envelope);
    detail::check_le(out, "mu.scan_n128", m128, envelope);
    detail::check_le(out, "mu.scan_n_independence",
                     std::abs(m128 - m32) / m32, 0.10);
    double mu1 = 0.0;
    for (int j = 0; j <= 16; ++j) {
      mu1 = std::max(mu1, std::abs(mu_coefficient(alpha, 1, 1, j / 16.0)));
    }
    detail::check_le(out, "mu.single_step_bound", mu1, 1.0 + 1e-12);
  }

  {  // piecewise-constant vs interpolant gap
    const TimeGrid grid(1.0 / 64, 64);
    const CaputoWeights w = build_weights(FractionalOrder(0.5), 64);
    double worst = -1.0;
    for (int rep = 0; rep < 50; ++rep) {
      const ScalarPath f = detail::random_path(rng, grid);
      const double gap = constant_to_piecewise_gap(f, 2.0);
      const double shift = piecewise_shift_check(f, w, 2.0).shift_norm;
      worst = std::max(worst, gap - shift);
    }
    detail::check_le(out, "gap.bounded_by_tau_shift", worst, 0.0);

    bool decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int nn : {16, 32, 64, 128}) {
      const TimeGrid g(1.0 / nn, nn);
      const ScalarPath f = sample_scalar(g, [](double t) { return std::sin(t); });
      const double gap = constant_to_piecewise_gap(f, 2.0);
      if (gap >= prev) decreasing = false;
      prev = gap;
    }
    detail::check_true(out, "gap.vanishes_under_refinement", decreasing);
  }

  return out;
}

// ---- spectral -----------------------------------------------------------

inline CheckList verify_spectral(std::uint64_t seed = 42) {
  CheckList out;
  Xoshiro256 rng(seed);

  auto cosine_field = [](const TorusGrid& g, int nx) {
    GridField f(g);
    for (std::size_t flat = 0; flat < f.samples.size(); ++flat) {
      const auto idx = g.unflatten(flat);
      f.samples[flat] = std::cos(nx * g.spacing() * idx[0]);
    }
    return f;
  };

  {
    const TorusGrid g(1, 32);
    const GridField c(g, std::vector<double>(g.total(), 2.5));
    detail::check_le(out, "spectral.fraclap_constant",
                     lp_norm(frac_laplacian(c, 0.5), std::numeric_limits<double>::infinity()),
                     1e-14);
    const GridField cosx = cosine_field(g, 1);
    double worst = 0.0;
    for (double s : {0.3, 0.75, 1.0}) {
      worst = std::max(worst, lp_norm(frac_laplacian(cosx, s) - cosx,
                                      std::numeric_limits<double>::infinity()));
    }
    detail::check_le(out, "spectral.unit_mode_eigenfunction", worst, 1e-12);
    const GridField cos2x = cosine_field(g, 2);
    detail::check_le(out, "spectral.mode2_s_half",
                     lp_norm(frac_laplacian(cos2x, 0.5) - 2.0 * cos2x,
                             std::numeric_limits<double>::infinity()),
                     1e-12);
  }

  for (int dim : {1, 2, 3}) {
    const TorusGrid g(dim, dim == 3 ? 16 : 32);
    const GridField f = detail::random_bandlimited_field(rng, g);
    const std::string tag = "spectral.d" + std::to_string(dim);

    const Spectrum sp = to_spectrum(f);
    double par = 0.0;
    for (const auto& c : sp.coeff) par += std::norm(c);
    const double l2 = lp_norm(f, 2.0);
    detail::check_le(out, tag + ".parseval",
                     std::abs(l2 * l2 - g.volume() * par) / std::max(1.0, l2 * l2), 1e-10);

    const GridField rt = to_field(sp);
    double rterr = 0.0;
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
      rterr = std::max(rterr, std::abs(rt.samples[i] - f.samples[i]));
    }
    detail::check_le(out, tag + ".round_trip", rterr / std::max(1.0, lp_norm(f, std::numeric_limits<double>::infinity())), 1e-12);

    detail::check_le(out, tag + ".s1_equals_laplacian",
                     lp_norm(frac_laplacian(f, 1.0) - (-1.0 * laplacian(f)),
                             std::numeric_limits<double>::infinity()),
                     1e-12 * std::max(1.0, lp_norm(laplacian(f), std::numeric_limits<double>::infinity())));

    detail::check_le(out, tag + ".div_grad_laplacian",
                     lp_norm(divergence(gradient(f)) - laplacian(f),
                             std::numeric_limits<double>::infinity()),
                     1e-12 * std::max(1.0, lp_norm(laplacian(f), std::numeric_limits<double>::infinity())));

    const GridField g1 = detail::random_bandlimited_field(rng, g);
    const double lhs = l2_inner(frac_laplacian(f, 0.6), g1);
    const double mid = l2_inner(f, frac_laplacian(g1, 0.6));
    const double rhs = l2_inner(frac_laplacian(f, 0.3), frac_laplacian(g1, 0.3));
    detail::check_le(out, tag + ".self_adjoint",
                     std::max(std::abs(lhs - mid), std::abs(lhs - rhs)) /
                         std::max(1.0, std::abs(lhs)),
                     1e-10);

    // semigroup of multipliers via spectra
    const Spectrum s1 = to_spectrum(frac_laplacian(frac_laplacian(f, 0.4), 0.3));
    const Spectrum s2 = to_spectrum(frac_laplacian(f, 0.7));
    double semi = 0.0;
    for (std::size_t i = 0; i < s1.coeff.size(); ++i) {
      semi = std::max(semi, std::abs(s1.coeff[i] - s2.coeff[i]));
    }
    detail::check_le(out, tag + ".multiplier_semigroup", semi, 1e-11);

    const double mean_drift = std::max({std::abs(mean(frac_laplacian(f, 0.5))),
                                        std::abs(mean(laplacian(f))),
                                        std::abs(mean(divergence(gradient(f))))});
    detail::check_le(out, tag + ".mean_preserved", mean_drift, 1e-13);
  }

  {  // dealias band behaviour
    const TorusGrid g(1, 32);
    GridField f = detail::random_bandlimited_field(rng, g);
    const Spectrum sp = to_spectrum(f);
    const Spectrum d = dealias(sp);
    double change = 0.0;
    for (std::size_t i = 0; i < sp.coeff.size(); ++i) change = std::max(change, std::abs(sp.coeff[i] - d.coeff[i]));
    detail::check_le(out, "dealias.bandlimited_unchanged", change, 0.0);

    GridField hi(g);
    for (std::size_t flat = 0; flat < hi.samples.size(); ++flat) {
      hi.samples[flat] = std::cos((g.points / 2 - 1) * g.spacing() * static_cast<double>(flat));
    }
    const Spectrum hid = dealias(to_spectrum(hi));
    double remain = 0.0;
    for (const auto& c : hid.coeff) remain = std::max(remain, std::abs(c));
    detail::check_le(out, "dealias.high_mode_zeroed", remain, 1e-15);

    GridField sq(g);
    const int k = g.points / 3 + 1;
    for (std::size_t flat = 0; flat < sq.samples.size(); ++flat) {
      const double c = std::cos(k * g.spacing() * static_cast<double>(flat));
      sq.samples[flat] = c * c;
    }
    const Spectrum sqd = dealias(to_spectrum(sq));
    double high = 0.0;
    for (std::size_t i = 0; i < sqd.coeff.size(); ++i) {
      if (3 * std::abs(g.freq(static_cast<int>(i))) > g.points) {
        high = std::max(high, std::abs(sqd.coeff[i]));
      }
    }
    detail::check_le(out, "dealias.square_has_no_high_modes", high, 0.0);
  }

  {  // norms and energy closed forms (d = 1)
    const TorusGrid g(1, 32);
    const double tp = 2.0 * std::numbers::pi;
    const GridField c(g, std::vector<double>(g.total(), -1.5));
    detail::check_le(out, "norm.constant_l2",
                     std::abs(lp_norm(c, 2.0) - 1.5 * std::sqrt(tp)), 1e-12);
    GridField cosx(g);
    for (std::size_t i = 0; i < cosx.samples.size(); ++i) cosx.samples[i] = std::cos(g.spacing() * static_cast<double>(i));
    detail::check_le(out, "norm.cos_l2",
                     std::abs(lp_norm(cosx, 2.0) - std::sqrt(std::numbers::pi)), 1e-12);
    detail::check_le(out, "norm.cos_hs",
                     std::abs(hs_seminorm(cosx, 0.37) - std::sqrt(std::numbers::pi)), 1e-12);
    const GridField zero(g);
    const GridField one(g, std::vector<double>(g.total(), 1.0));
    detail::check_le(out, "energy.zero_const", std::abs(energy(zero, c)), 1e-14);
    detail::check_le(out, "energy.unit_density", std::abs(energy(one, c) - tp), 1e-12);
    detail::check_le(out, "energy.cos_pressure",
                     std::abs(energy(zero, cosx) - 0.5 * std::numbers::pi), 1e-12);
    GridField sinx(g);
    for (std::size_t i = 0; i < sinx.samples.size(); ++i) sinx.samples[i] = std::sin(g.spacing() * static_cast<double>(i));
    detail::check_le(out, "gradient.sin_to_cos",
                     lp_norm(gradient(sinx).comp[0] - cosx, std::numeric_limits<double>::infinity()),
                     1e-12);
  }

  return out;
}

// ---- solver -------------------------------------------------------------

inline CheckList verify_solver(std::uint64_t seed = 42) {
  CheckList out;
  Xoshiro256 rng(seed);
  (void)rng;

  {  // constant data reduce to the scalar zero-mode dynamics
    const double a = 1.3, c = 0.8, alpha = 0.5;
    SolverConfig cfg{FractionalOrder(alpha), 0.75, TorusGrid(1, 16),
                     TimeGrid(1.0 / 16, 8)};
    cfg.rho = 1e-2;
    cfg.eps = 1e-2;
    const GridField u0(cfg.grid, std::vector<double>(cfg.grid.total(), a));
    const GridField p0(cfg.grid, std::vector<double>(cfg.grid.total(), c));
    const RunResult r = run(cfg, u0, p0);
    double worst_u = 0.0, worst_p = 0.0;
    const double coeff = std::pow(cfg.time.tau, alpha) / gamma_fn(alpha);
    for (int k = 1; k <= 8; ++k) {
      worst_u = std::max(worst_u, std::abs(r.ledger.mean_u[static_cast<std::size_t>(k)] - a));
      double s = 0.0;
      for (int i = 1; i <= k; ++i) s += std::pow(static_cast<double>(k - i + 1), alpha - 1.0);
      const double expect = c + coeff * a * a * s;
      worst_p = std::max(worst_p, std::abs(r.ledger.mean_p[static_cast<std::size_t>(k)] - expect));
      if (lp_norm(r.history.u_steps[static_cast<std::size_t>(k)] - u0,
                  std::numeric_limits<double>::infinity()) > worst_u) {
        worst_u = lp_norm(r.history.u_steps[static_cast<std::size_t>(k)] - u0,
                          std::numeric_limits<double>::infinity());
      }
    }
    detail::check_le(out, "solver.constant_density_fixed", worst_u, 1e-12);
    detail::check_le(out, "solver.constant_pressure_ftc", worst_p, 1e-10);
    bool pmono = true;
    for (std::size_t k = 1; k < r.ledger.mean_p.size(); ++k) {
      pmono = pmono && r.ledger.mean_p[k] >= r.ledger.mean_p[k - 1];
    }
    detail::check_true(out, "solver.constant_pressure_monotone", pmono);
    const Verdicts v = diagnostics(r.history, r.ledger, cfg);
    detail::check_true(out, "solver.constant_verdicts", v.all_ok());
    const double l3_expect = cfg.time.horizon() * cfg.grid.volume() * a * a * a;
    detail::check_le(out, "solver.constant_l3_closed_form",
                     std::abs(r.ledger.l3_accum.back() - l3_expect) / l3_expect, 1e-12);
  }

  {  // smooth run: structural verdicts, zero-mode identity, weak residuals
    SolverConfig cfg{FractionalOrder(0.5), 0.75, TorusGrid(1, 32),
                     TimeGrid(1.0 / 32, 16)};
    cfg.rho = 1e-2;
    cfg.eps = 1e-2;
    GridField u0(cfg.grid), p0(cfg.grid);
    for (std::size_t i = 0; i < u0.samples.size(); ++i) {
      const double x = cfg.grid.spacing() * static_cast<double>(i);
      u0.samples[i] = 1.0 + 0.5 * std::cos(x);
      p0.samples[i] = 1.0 + 0.3 * std::cos(x);
    }
    const RunResult r = run(cfg, u0, p0);
    const Verdicts v = diagnostics(r.history, r.ledger, cfg);
    detail::check_true(out, "solver.smooth_mass", v.mass_ok);
    detail::check_true(out, "solver.smooth_energy", v.energy_ok);
    detail::check_true(out, "solver.smooth_positivity", v.positivity_ok);
    detail::check_true(out, "solver.smooth_pressure_mean", v.pressure_mean_ok);

    // zero mode: D^a_tau (mean p) = mean(u_k^2)
    const CaputoWeights w = build_weights(cfg.alpha, 16);
    ScalarPath pbar{cfg.time, r.ledger.mean_p};
    const auto d = left_caputo(pbar, w);
    double worst = 0.0;
    for (int k = 1; k <= 16; ++k) {
      const GridField& uk = r.history.u_steps[static_cast<std::size_t>(k)];
      worst = std::max(worst, std::abs(d[k] - mean(pointwise(uk, uk))));
    }
    detail::check_le(out, "solver.pressure_zero_mode_identity", worst, 1e-10);

    double res = 0.0;
    for (int k = 1; k <= 16; ++k) {
      const WeakResiduals wr = weak_form_residuals(r.history, cfg, k);
      res = std::max(res, std::max(wr.res_u, wr.res_p) / wr.picard_scale);
    }
    detail::check_le(out, "solver.weak_form_residual", res, 10.0 * cfg.picard_tol);
  }

  {  // invalid data rejected before stepping
    SolverConfig cfg{FractionalOrder(0.5), 0.75, TorusGrid(1, 16),
                     TimeGrid(1.0 / 16, 4)};
    GridField u0(cfg.grid, std::vector<double>(cfg.grid.total(), 1.0));
    GridField bad(cfg.grid);
    for (std::size_t i = 0; i < bad.samples.size(); ++i) {
      bad.samples[i] = std::cos(cfg.grid.spacing() * static_cast<double>(i));
    }
    bool threw = false;
    try {
      run(cfg, u0, bad);
    } catch (const InvalidInitialData&) {
      threw = true;
    }
    detail::check_true(out, "solver.rejects_nonpositive_data", threw);
  }

  return out;
}

inline CheckList verify_suite(const std::string& suite, std::uint64_t seed = 42) {
  CheckList out;
  auto append = [&](CheckList&& extra) {
    for (auto& c : extra) out.push_back(std::move(c));
  };
  if (suite == "weights" || suite == "all") append(verify_weights(seed));
  if (suite == "caputo" || suite == "all") append(verify_caputo(seed));
  if (suite == "ibp" || suite == "all") append(verify_ibp(seed));
  if (suite == "compactness" || suite == "all") append(verify_compactness(seed));
  if (suite == "spectral" || suite == "all") append(verify_spectral(seed));
  if (suite == "solver" || suite == "all") append(verify_solver(seed));
  if (out.empty()) throw std::invalid_argument("unknown verify suite: " + suite);
  return out;
}

}  // namespace fracpde
