// Implicit-Euler time stepping of the regularized fractional
// porous-medium system on the torus,
//
//   D^a_tau u_k = div(u_k grad p_k) + rho Lap u_k,
//   D^a_tau p_k = -(-Lap)^s p_k + eps Lap p_k + u_k^2,
//
// with full Caputo memory over the history. Each step is solved by Picard
// iteration of the linearized map z -> (p(z), u(z, p)); both linear solves
// are diagonal in Fourier space. Products (z^2, z+ grad p) are formed
// pointwise on nodes and dealiased; z+ is the nodal positive part.
//
// The rearrangement isolates lambda_1 (f_k - f_{k-1}) so only the current
// unknown sits on the left:
//   (C lambda_1 + multiplier) fhat_k = rhs - C * memhat,
//   memhat = sum_{j=0}^{k-2} lambda_{k-j} (fhat_{j+1} - fhat_j) - lambda_1 fhat_{k-1},
// with C = Gamma(a) tau^{-a} and lambda_1 = 1 exactly.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracpde/gamma.hpp"
#include "fracpde/torus.hpp"
#include "fracpde/weights.hpp"

namespace fracpde {

struct SolverConfig {
  FractionalOrder alpha;
  double s;  // fractional Laplacian exponent in (0, 1]
  TorusGrid grid;
  TimeGrid time;
  double rho = 0.0;  // density viscosity
  double eps = 0.0;  // pressure viscosity
  double picard_tol = 1e-10;
  int picard_max = 200;
  double picard_damping = 1.0;
  bool clip_negative = false;
  double tol_pos = 1e-8;

  void validate() const {
    if (!(s > 0.0) || s > 1.0) throw std::invalid_argument("SolverConfig: s in (0,1]");
    if (rho < 0.0 || eps < 0.0) throw std::invalid_argument("SolverConfig: rho, eps >= 0");
    if (!(picard_tol > 0.0)) throw std::invalid_argument("SolverConfig: picard_tol > 0");
    if (picard_max < 1) throw std::invalid_argument("SolverConfig: picard_max >= 1");
    if (!(picard_damping > 0.0) || picard_damping > 1.0) {
      throw std::invalid_argument("SolverConfig: damping in (0,1]");
    }
    if (!(tol_pos > 0.0)) throw std::invalid_argument("SolverConfig: tol_pos > 0");
  }
};

struct StepReport {
  int k = 0;
  int picard_iters = 0;
  double picard_residual = 0.0;
  double min_u = 0.0;
  double min_p = 0.0;
  double mean_u = 0.0;
};

/// Full per-step storage; the Caputo memory sum needs every prior step.
struct History {
  std::vector<GridField> u_steps;  // index 0 = u_in
  std::vector<GridField> p_steps;  // index 0 = p_in
  std::vector<StepReport> reports; // index 0 is a placeholder for t = 0
  bool certified = true;           // false when clip_negative touched a field
};

/// Per-step energy H_k, dissipation terms, their weighted sums
///   S_k = (tau^a/Gamma(a)) sum_{i<=k} (k-i+1)^{a-1} (D_u + D_p + D_e)(i),
/// and the L^3(0,t;L^3) accumulator.
struct EnergyLedger {
  std::vector<double> H, D_u, D_p, D_e, S;
  std::vector<double> mean_u, mean_p, min_u, min_p, l3_accum;
  double H0() const { return H.empty() ? 0.0 : H.front(); }
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(int step, std::vector<double> residuals)
      : std::runtime_error("Picard iteration did not converge at step " +
                           std::to_string(step)),
        step(step),
        residual_history(std::move(residuals)) {}
  int step;
  std::vector<double> residual_history;
};

class InvalidInitialData : public std::runtime_error {
 public:
  explicit InvalidInitialData(const std::string& what)
      : std::runtime_error(what) {}
};

namespace detail {

inline double mode_n2(const TorusGrid& g, std::size_t flat) {
  const auto idx = g.unflatten(flat);
  double n2 = 0.0;
  for (int d = 0; d < g.dim; ++d) {
    const double n = g.freq(idx[static_cast<std::size_t>(d)]);
    n2 += n * n;
  }
  return n2;
}

/// memhat for the spectra f_0..f_{k-1} of one variable.
inline Spectrum memory_spectrum(const std::vector<Spectrum>& hist, int k,
                                const CaputoWeights& w) {
  Spectrum mem(hist[0].grid);
  for (int j = 0; j <= k - 2; ++j) {
    const double lam = w.lambda(k - j);
    const auto& a = hist[static_cast<std::size_t>(j) + 1].coeff;
    const auto& b = hist[static_cast<std::size_t>(j)].coeff;
    for (std::size_t i = 0; i < mem.coeff.size(); ++i) {
      mem.coeff[i] += lam * (a[i] - b[i]);
    }
  }
  const auto& prev = hist[static_cast<std::size_t>(k) - 1].coeff;
  for (std::size_t i = 0; i < mem.coeff.size(); ++i) {
    mem.coeff[i] -= w.lambda(1) * prev[i];
  }
  return mem;
}

inline double caputo_coeff(const SolverConfig& cfg) {
  return gamma_fn(cfg.alpha.alpha) * std::pow(cfg.time.tau, -cfg.alpha.alpha);
}

inline Spectrum spectral_divergence_of(const GridField& weight,
                                       const Spectrum& p_hat,
                                       const SolverConfig& cfg) {
  Spectrum div(p_hat.grid);
  for (int d = 0; d < cfg.grid.dim; ++d) {
    const GridField dp = to_field(derivative_spectrum(p_hat, d));
    const Spectrum flux = dealias(to_spectrum(pointwise(weight, dp)));
    const Spectrum dflux = derivative_spectrum(flux, d);
    for (std::size_t i = 0; i < div.coeff.size(); ++i) div.coeff[i] += dflux.coeff[i];
  }
  return div;
}

}  // namespace detail

/// Solves the linearized pressure equation for the iterate z:
/// (C + |n|^{2s} + eps |n|^2) phat_k = (z^2)^hat - C memhat. Exact per mode.
inline Spectrum pressure_step(const std::vector<Spectrum>& p_hist, int k,
                              const GridField& z, const SolverConfig& cfg,
                              const CaputoWeights& w) {
  const double coeff = detail::caputo_coeff(cfg);
  const Spectrum zsq = dealias(to_spectrum(pointwise(z, z)));
  const Spectrum mem = detail::memory_spectrum(p_hist, k, w);
  Spectrum out(cfg.grid);
  for (std::size_t i = 0; i < out.coeff.size(); ++i) {
    const double n2 = detail::mode_n2(cfg.grid, i);
    const double frac = n2 > 0.0 ? std::pow(n2, cfg.s) : 0.0;
    const double denom = coeff * w.lambda(1) + frac + cfg.eps * n2;
    out.coeff[i] = (zsq.coeff[i] - coeff * mem.coeff[i]) / denom;
  }
  return out;
}

/// Solves the linearized density equation:
/// (C + rho |n|^2) uhat_k = div(z+ grad p_k)^hat - C memhat.
inline Spectrum density_step(const std::vector<Spectrum>& u_hist, int k,
                             const GridField& z, const Spectrum& p_hat,
                             const SolverConfig& cfg, const CaputoWeights& w) {
  const double coeff = detail::caputo_coeff(cfg);
  const Spectrum drift = detail::spectral_divergence_of(positive_part(z), p_hat, cfg);
  const Spectrum mem = detail::memory_spectrum(u_hist, k, w);
  Spectrum out(cfg.grid);
  for (std::size_t i = 0; i < out.coeff.size(); ++i) {
    const double n2 = detail::mode_n2(cfg.grid, i);
    const double denom = coeff * w.lambda(1) + cfg.rho * n2;
    out.coeff[i] = (drift.coeff[i] - coeff * mem.coeff[i]) / denom;
  }
  return out;
}

struct StepSolution {
  GridField u;
  GridField p;
  Spectrum u_hat;
  Spectrum p_hat;
  StepReport report;
};

/// One implicit step by damped Picard iteration of z -> u(z, p(z)),
/// starting from z = u_{k-1}; p_k is recomputed once from the converged u_k.
inline StepSolution picard_solve(const std::vector<Spectrum>& u_hist,
                                 const std::vector<Spectrum>& p_hist,
                                 const GridField& u_prev, int k,
                                 const SolverConfig& cfg,
                                 const CaputoWeights& w) {
  GridField z = u_prev;
  std::vector<double> residuals;
  for (int it = 1; it <= cfg.picard_max; ++it) {
    const Spectrum p_hat = pressure_step(p_hist, k, z, cfg, w);
    const Spectrum u_hat = density_step(u_hist, k, z, p_hat, cfg, w);
    const GridField u_next = to_field(u_hat);
    const GridField z_new =
        cfg.picard_damping == 1.0
            ? u_next
            : (1.0 - cfg.picard_damping) * z + cfg.picard_damping * u_next;
    const double res = lp_norm(z_new - z, 2.0);
    residuals.push_back(res);
    z = z_new;
    if (res <= cfg.picard_tol) {
      StepSolution sol{z, GridField(cfg.grid), to_spectrum(z),
                       pressure_step(p_hist, k, z, cfg, w), {}};
      sol.p = to_field(sol.p_hat);
      sol.report.k = k;
      sol.report.picard_iters = it;
      sol.report.picard_residual = res;
      sol.report.min_u = min_value(sol.u);
      sol.report.min_p = min_value(sol.p);
      sol.report.mean_u = mean(sol.u);
      return sol;
    }
  }
  throw NonConvergence(k, std::move(residuals));
}

struct RunResult {
  History history;
  EnergyLedger ledger;
};

/// Full run over k = 1..N. Requires strictly positive initial data.
inline RunResult run(const SolverConfig& cfg, const GridField& u_in,
                     const GridField& p_in) {
  cfg.validate();
  if (!(u_in.grid == cfg.grid) || !(p_in.grid == cfg.grid)) {
    throw std::invalid_argument("run: initial data on the wrong grid");
  }
  if (min_value(u_in) <= 0.0 || min_value(p_in) <= 0.0) {
    throw InvalidInitialData("run: initial data must be positive at all nodes");
  }
  const int n = cfg.time.n_steps;
  const CaputoWeights w = build_weights(cfg.alpha, n);
  const double alpha = cfg.alpha.alpha;

  RunResult out{History{}, EnergyLedger{}};
  History& hist = out.history;
  EnergyLedger& led = out.ledger;
  hist.u_steps.push_back(u_in);
  hist.p_steps.push_back(p_in);
  StepReport zero;
  zero.min_u = min_value(u_in);
  zero.min_p = min_value(p_in);
  zero.mean_u = mean(u_in);
  hist.reports.push_back(zero);

  std::vector<Spectrum> u_hat_hist{to_spectrum(u_in)};
  std::vector<Spectrum> p_hat_hist{to_spectrum(p_in)};

  auto dissipation = [&](const GridField& u, const GridField& p) {
    double du = 0.0;
    for (const auto& c : gradient(u).comp) {
      const double g = lp_norm(c, 2.0);
      du += g * g;
    }
    double dp = 0.0;
    for (const auto& c : gradient(p).comp) {
      const double g = hs_seminorm(c, cfg.s);
      dp += g * g;
    }
    const double lp = lp_norm(laplacian(p), 2.0);
    return std::array<double, 3>{cfg.rho * du, 0.5 * dp, 0.5 * cfg.eps * lp * lp};
  };

  led.H.push_back(energy(u_in, p_in));
  {
    const auto d0 = dissipation(u_in, p_in);
    led.D_u.push_back(d0[0]);
    led.D_p.push_back(d0[1]);
    led.D_e.push_back(d0[2]);
  }
  led.S.push_back(0.0);
  led.mean_u.push_back(mean(u_in));
  led.mean_p.push_back(mean(p_in));
  led.min_u.push_back(min_value(u_in));
  led.min_p.push_back(min_value(p_in));
  led.l3_accum.push_back(0.0);

  const double ftc_coeff = std::pow(cfg.time.tau, alpha) / gamma_fn(alpha);
  double l3 = 0.0;
  for (int k = 1; k <= n; ++k) {
    StepSolution sol =
        picard_solve(u_hat_hist, p_hat_hist, hist.u_steps.back(), k, cfg, w);
    if (cfg.clip_negative &&
        (min_value(sol.u) < 0.0 || min_value(sol.p) < 0.0)) {
      sol.u = positive_part(sol.u);
      sol.p = positive_part(sol.p);
      sol.u_hat = to_spectrum(sol.u);
      sol.p_hat = to_spectrum(sol.p);
      hist.certified = false;
    }
    hist.u_steps.push_back(sol.u);
    hist.p_steps.push_back(sol.p);
    hist.reports.push_back(sol.report);
    u_hat_hist.push_back(sol.u_hat);
    p_hat_hist.push_back(sol.p_hat);

    led.H.push_back(energy(sol.u, sol.p));
    const auto d = dissipation(sol.u, sol.p);
    led.D_u.push_back(d[0]);
    led.D_p.push_back(d[1]);
    led.D_e.push_back(d[2]);
    double s_k = 0.0;
    for (int i = 1; i <= k; ++i) {
      s_k += std::pow(static_cast<double>(k - i + 1), alpha - 1.0) *
             (led.D_u[static_cast<std::size_t>(i)] + led.D_p[static_cast<std::size_t>(i)] +
              led.D_e[static_cast<std::size_t>(i)]);
    }
    led.S.push_back(ftc_coeff * s_k);
    led.mean_u.push_back(mean(sol.u));
    led.mean_p.push_back(mean(sol.p));
    led.min_u.push_back(min_value(sol.u));
    led.min_p.push_back(min_value(sol.p));
    const double u3 = lp_norm(sol.u, 3.0);
    l3 += cfg.time.tau * u3 * u3 * u3;
    led.l3_accum.push_back(l3);
  }
  return out;
}

struct Verdicts {
  bool mass_ok = false;
  bool energy_ok = false;
  bool positivity_ok = false;
  bool pressure_mean_ok = false;
  double max_mass_drift = 0.0;
  double max_energy_excess = 0.0;  // max_k (H_k + S_k)/H_0 - 1
  double min_field_value = 0.0;
  double max_pressure_mean_excess = 0.0;

  bool all_ok() const {
    return mass_ok && energy_ok && positivity_ok && pressure_mean_ok;
  }
};

inline constexpr double kMassTol = 1e-12;
inline constexpr double kEnergySlack = 1e-6;
inline constexpr double kPressureMeanSlack = 1e-6;

/// Pass/fail verdicts for the run-level inequalities: mass conservation,
/// the discrete energy estimate, positivity, and the pressure-mean bound
/// mean(p_k) <= mean(p_in) + H_0 T^a / (a Gamma(a) (2pi)^d).
inline Verdicts diagnostics(const History& hist, const EnergyLedger& led,
                            const SolverConfig& cfg) {
  Verdicts v;
  const double alpha = cfg.alpha.alpha;
  const double H0 = led.H0();
  const double T = cfg.time.horizon();
  const double vol = cfg.grid.volume();
  const double p_bound =
      led.mean_p.front() +
      H0 * std::pow(T, alpha) / (alpha * gamma_fn(alpha) * vol) *
          (1.0 + kPressureMeanSlack);

  v.min_field_value = led.min_u.front();
  for (std::size_t k = 0; k < led.H.size(); ++k) {
    v.max_mass_drift =
        std::max(v.max_mass_drift, std::abs(led.mean_u[k] - led.mean_u.front()));
    v.max_energy_excess =
        std::max(v.max_energy_excess, (led.H[k] + led.S[k]) / H0 - 1.0);
    v.min_field_value = std::min({v.min_field_value, led.min_u[k], led.min_p[k]});
    v.max_pressure_mean_excess =
        std::max(v.max_pressure_mean_excess, led.mean_p[k] - p_bound);
  }
  v.mass_ok = v.max_mass_drift <= kMassTol;
  v.energy_ok = v.max_energy_excess <= kEnergySlack;
  v.positivity_ok = v.min_field_value >= -cfg.tol_pos;
  v.pressure_mean_ok = v.max_pressure_mean_excess <= 0.0;
  (void)hist;
  return v;
}

/// Ledger CSV, columns exactly:
/// step,t,H,S,mean_u,mean_p,min_u,min_p,l3_accum,picard_iters
inline std::string ledger_csv(const History& hist, const EnergyLedger& led,
                              const SolverConfig& cfg) {
  std::string out = "step,t,H,S,mean_u,mean_p,min_u,min_p,l3_accum,picard_iters\n";
  char row[320];
  for (std::size_t k = 0; k < led.H.size(); ++k) {
    std::snprintf(row, sizeof(row),
                  "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", k,
                  cfg.time.t(static_cast<int>(k)), led.H[k], led.S[k],
                  led.mean_u[k], led.mean_p[k], led.min_u[k], led.min_p[k],
                  led.l3_accum[k], hist.reports[k].picard_iters);
    out += row;
  }
  return out;
}

struct WeakResiduals {
  double res_u = 0.0;  // L^2 norm of the density equation residual field
  double res_p = 0.0;  // L^2 norm of the pressure equation residual field
  double picard_scale = 1.0;  // Gamma(a) tau^{-a}, for Picard-sized comparisons
};

/// Residuals of the step-k equations at the stored solution, testing
/// against every retained Fourier mode (z = u_k, sigma = 1).
inline WeakResiduals weak_form_residuals(const History& hist,
                                         const SolverConfig& cfg, int k) {
  const CaputoWeights w = build_weights(cfg.alpha, cfg.time.n_steps);
  const double coeff = detail::caputo_coeff(cfg);
  std::vector<Spectrum> u_hat, p_hat;
  for (int j = 0; j <= k; ++j) {
    u_hat.push_back(to_spectrum(hist.u_steps[static_cast<std::size_t>(j)]));
    p_hat.push_back(to_spectrum(hist.p_steps[static_cast<std::size_t>(j)]));
  }
  const GridField& u_k = hist.u_steps[static_cast<std::size_t>(k)];
  const Spectrum mem_u = detail::memory_spectrum(u_hat, k, w);
  const Spectrum mem_p = detail::memory_spectrum(p_hat, k, w);
  const Spectrum drift = detail::spectral_divergence_of(positive_part(u_k), p_hat.back(), cfg);
  const Spectrum usq = dealias(to_spectrum(pointwise(u_k, u_k)));

  double acc_u = 0.0, acc_p = 0.0;
  for (std::size_t i = 0; i < u_hat.back().coeff.size(); ++i) {
    const double n2 = detail::mode_n2(cfg.grid, i);
    const double frac = n2 > 0.0 ? std::pow(n2, cfg.s) : 0.0;
    const std::complex<double> ru = (coeff + cfg.rho * n2) * u_hat.back().coeff[i] -
                                    drift.coeff[i] + coeff * mem_u.coeff[i];
    const std::complex<double> rp =
        (coeff + frac + cfg.eps * n2) * p_hat.back().coeff[i] - usq.coeff[i] +
        coeff * mem_p.coeff[i];
    acc_u += std::norm(ru);
    acc_p += std::norm(rp);
  }
  WeakResiduals r;
  r.res_u = std::sqrt(acc_u * cfg.grid.volume());
  r.res_p = std::sqrt(acc_p * cfg.grid.volume());
  r.picard_scale = coeff;
  return r;
}

}  // namespace fracpde
