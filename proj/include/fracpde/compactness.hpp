// Piecewise-constant / piecewise-linear interpolants of sampled paths and
// the quantitative shift estimates behind the discrete Aubin-Lions-type
// compactness argument:
//   * tau-shift of the piecewise-constant extension vs. the discrete
//     Caputo norm (constant 2^{1+1/p} tau^a / Gamma(a));
//   * h-shift of the linear interpolant vs. its continuous Caputo norm
//     (constant 2 h^a / (Gamma(a) a));
//   * uniform bound of the mu_k coefficients that compare the two.
// Piecewise-constant L^p norms are exact cell sums; interpolant norms use
// an evaluation mesh of >= 16 points per cell plus the grid points.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracpde/caputo.hpp"
#include "fracpde/gamma.hpp"
#include "fracpde/path.hpp"
#include "fracpde/weights.hpp"

namespace fracpde {

struct ShiftReport {
  double h = 0.0;
  double p = 2.0;  // norm exponent; infinity allowed
  double shift_norm = 0.0;
  double derivative_norm = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // shift_norm / bound, 0 when both vanish
};

namespace detail {
inline void require_norm_exponent(double p) {
  if (!(p == 1.0 || p == 2.0 || std::isinf(p))) {
    throw std::invalid_argument("shift check: p must be 1, 2 or inf");
  }
}

inline double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  return num / den;
}
}  // namespace detail

/// |f^{(tau)}(.+tau) - f^{(tau)}|_{L^p(0,T-tau)} against the tau-jump bound
/// (2^{1+1/p} tau^a / Gamma(a)) |D^a_tau f^{(tau)}|_{L^p(0,T)}.
/// Both sides are exact cell sums of the piecewise-constant functions.
template <class V>
ShiftReport piecewise_shift_check(const SampledPath<V>& f,
                                  const CaputoWeights& w, double p) {
  detail::require_norm_exponent(p);
  const int n = f.n_steps();
  const double tau = f.grid.tau;
  const double alpha = w.order.alpha;

  double shift = 0.0;
  for (int k = 1; k <= n - 1; ++k) {
    const double jump = vnorm(f[k + 1] - f[k]);
    shift = std::isinf(p) ? std::max(shift, jump) : shift + tau * std::pow(jump, p);
  }
  if (!std::isinf(p)) shift = std::pow(shift, 1.0 / p);

  const SampledPath<V> d = left_caputo(f, w);
  double dnorm = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double v = vnorm(d[k]);
    dnorm = std::isinf(p) ? std::max(dnorm, v) : dnorm + tau * std::pow(v, p);
  }
  if (!std::isinf(p)) dnorm = std::pow(dnorm, 1.0 / p);

  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  ShiftReport rep;
  rep.h = tau;
  rep.p = p;
  rep.shift_norm = shift;
  rep.derivative_norm = dnorm;
  rep.bound = std::pow(2.0, 1.0 + inv_p) * std::pow(tau, alpha) / gamma_fn(alpha) * dnorm;
  rep.ratio = detail::safe_ratio(shift, rep.bound);
  return rep;
}

/// Piecewise-linear interpolant of a scalar path; matches the base values
/// at every grid node exactly.
struct LinearInterpolant {
  ScalarPath base;

  explicit LinearInterpolant(ScalarPath b) : base(std::move(b)) {}

  double T() const { return base.grid.horizon(); }

  double eval(double t) const {
    const int n = base.n_steps();
    const double pos = t / base.grid.tau;
    const double r = std::round(pos);
    if (std::abs(pos - r) < 1e-12 * std::max(1.0, std::abs(pos)) && r >= 0 &&
        r <= n) {
      return base[static_cast<int>(r)];
    }
    int cell = static_cast<int>(std::floor(pos));
    cell = std::clamp(cell, 0, n - 1);
    const double theta = pos - cell;
    return base[cell] + theta * (base[cell + 1] - base[cell]);
  }
};

/// Closed form of D^a_t of the linear interpolant:
///   (tau^{-a} / Gamma(1-a)) sum_n (f_{n+1}-f_n)/(1-a) (g_n(t) - g_{n+1}(t)),
///   g_n(t) = tau^{a-1} (t - t_n)_+^{1-a}.
/// alpha = 1 is rejected; use the exact slope for the classical case.
inline double interpolant_caputo(const LinearInterpolant& interp, double alpha,
                                 double t) {
  if (alpha >= 1.0) {
    throw std::invalid_argument("interpolant_caputo: requires alpha < 1");
  }
  if (t < 0.0 || t > interp.T() * (1.0 + 1e-12)) {
    throw std::out_of_range("interpolant_caputo: t outside [0, T]");
  }
  if (t <= 0.0) return 0.0;
  const ScalarPath& f = interp.base;
  const double tau = f.grid.tau;
  auto g = [&](int n) {
    const double arg = t - n * tau;
    return arg > 0.0 ? std::pow(tau, alpha - 1.0) * std::pow(arg, 1.0 - alpha) : 0.0;
  };
  double acc = 0.0;
  for (int n = 0; n < f.n_steps(); ++n) {
    const double gn = g(n);
    if (gn == 0.0) break;  // later terms vanish too
    acc += (f[n + 1] - f[n]) * (gn - g(n + 1));
  }
  return std::pow(tau, -alpha) / gamma_fn(1.0 - alpha) * acc / (1.0 - alpha);
}

namespace detail {
/// Exact L^p(0, T-h) norm of t -> interp(t+h) - interp(t). The difference
/// is piecewise linear with breakpoints at t_n and t_n - h.
inline double interpolant_shift_norm(const LinearInterpolant& interp, double h,
                                     double p) {
  const double T = interp.T();
  const double tau = interp.base.grid.tau;
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (int n = 1; n <= interp.base.n_steps(); ++n) {
    const double tn = n * tau;
    if (tn < T - h) cuts.push_back(tn);
    if (tn - h > 0.0 && tn - h < T - h) cuts.push_back(tn - h);
  }
  cuts.push_back(T - h);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-15; }),
             cuts.end());

  auto diff = [&](double t) { return interp.eval(t + h) - interp.eval(t); };
  if (std::isinf(p)) {
    double m = 0.0;
    for (double c : cuts) m = std::max(m, std::abs(diff(c)));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double len = b - a;
    if (len <= 0.0) continue;
    const double va = diff(a), vb = diff(b);
    if (p == 2.0) {
      // exact for a linear integrand squared
      acc += len / 3.0 * (va * va + va * vb + vb * vb);
    } else {
      // exact |linear|: split at the sign change
      if (va * vb >= 0.0) {
        acc += 0.5 * len * (std::abs(va) + std::abs(vb));
      } else {
        const double root = len * std::abs(va) / (std::abs(va) + std::abs(vb));
        acc += 0.5 * (root * std::abs(va) + (len - root) * std::abs(vb));
      }
    }
  }
  return std::pow(acc, 1.0 / p);
}

/// L^p(0,T) norm of D^a interp evaluated on a mesh of `per_cell`
/// Gauss-sampled subintervals per tau-cell (plus nodes for p = inf).
inline double interpolant_caputo_norm(const LinearInterpolant& interp,
                                      double alpha, double p,
                                      int per_cell = 16) {
  const ScalarPath& f = interp.base;
  const double tau = f.grid.tau;
  auto dval = [&](double t) { return interpolant_caputo(interp, alpha, t); };
  if (std::isinf(p)) {
    double m = 0.0;
    for (int n = 0; n < f.n_steps(); ++n) {
      for (int j = 0; j <= per_cell; ++j) {
        const double t = (n + static_cast<double>(j) / per_cell) * tau;
        m = std::max(m, std::abs(dval(t)));
      }
    }
    return m;
  }
  double acc = 0.0;
  auto absp = [&](double t) { return std::pow(std::abs(dval(t)), p); };
  for (int n = 0; n < f.n_steps(); ++n) {
    acc += composite_gauss4(absp, n * tau, (n + 1) * tau, per_cell);
  }
  return std::pow(acc, 1.0 / p);
}
}  // namespace detail

/// |interp(.+h) - interp|_{L^p(0,T-h)} against the continuous shift bound
/// (2 h^a / (Gamma(a) a)) |D^a_t interp|_{L^p(0,T)}.
inline ShiftReport interpolant_shift_check(const LinearInterpolant& interp,
                                           double alpha, double h, double p,
                                           int per_cell = 16) {
  detail::require_norm_exponent(p);
  if (!(h > 0.0) || h >= interp.T()) {
    throw std::invalid_argument("interpolant_shift_check: need 0 < h < T");
  }
  ShiftReport rep;
  rep.h = h;
  rep.p = p;
  rep.shift_norm = detail::interpolant_shift_norm(interp, h, p);
  rep.derivative_norm = detail::interpolant_caputo_norm(interp, alpha, p, per_cell);
  rep.bound = 2.0 * std::pow(h, alpha) / (gamma_fn(alpha) * alpha) * rep.derivative_norm;
  rep.ratio = detail::safe_ratio(rep.shift_norm, rep.bound);
  return rep;
}

/// mu_k(rho) = sum_{s=0}^{N-k} w_s ((rho-s-k+1)_+^{1-a} - (rho-s-k)_+^{1-a}),
/// w_0 = 1, w_s = (s+1)^{a-1} - s^{a-1}. Dimensionless in rho = t/tau.
inline double mu_coefficient(double alpha, int n_steps, int k, double rho) {
  auto gplus = [&](double arg) { return arg > 0.0 ? std::pow(arg, 1.0 - alpha) : 0.0; };
  double acc = 0.0;
  for (int s = 0; s <= n_steps - k; ++s) {
    const double w =
        s == 0 ? 1.0
               : std::pow(static_cast<double>(s + 1), alpha - 1.0) -
                     std::pow(static_cast<double>(s), alpha - 1.0);
    const double base = rho - s - k;
    acc += w * (gplus(base + 1.0) - gplus(base));
  }
  return acc;
}

/// Max over k = 1..N and a rho-mesh (eval_points per unit cell, cell edges
/// included) of |mu_k|. Bounded uniformly in N.
inline double mu_coefficient_scan(double alpha, int n_steps,
                                  int eval_points = 16) {
  if (!(alpha > 0.0) || alpha >= 1.0) {
    throw std::invalid_argument("mu_coefficient_scan: alpha in (0,1)");
  }
  double worst = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    for (int cell = 0; cell < n_steps; ++cell) {
      for (int j = 0; j <= eval_points; ++j) {
        const double rho = cell + static_cast<double>(j) / eval_points;
        worst = std::max(worst, std::abs(mu_coefficient(alpha, n_steps, k, rho)));
      }
    }
  }
  return worst;
}

/// Conservative union of the proof's case bounds:
/// 1 + 6 + a(1-a) sum_{r>=1} r^{-1-a} + 1.
inline double mu_scan_envelope(double alpha) {
  double zeta = 0.0;
  const int R = 100000;
  for (int r = 1; r <= R; ++r) zeta += std::pow(static_cast<double>(r), -1.0 - alpha);
  zeta += std::pow(static_cast<double>(R), -alpha) / alpha;  // integral tail
  return 8.0 + alpha * (1.0 - alpha) * zeta;
}

/// Empirical constant of the interpolant-vs-discrete comparison,
/// max |mu_k| / (Gamma(1-a) Gamma(a) (1-a)).
inline double interpolant_comparison_constant(double alpha, int n_steps,
                                              int eval_points = 16) {
  return mu_coefficient_scan(alpha, n_steps, eval_points) /
         (gamma_fn(1.0 - alpha) * gamma_fn(alpha) * (1.0 - alpha));
}

/// Exact L^p(0,T) distance between the piecewise-constant extension and
/// the linear interpolant of the same path; controlled by the tau-shift.
template <class V>
double constant_to_piecewise_gap(const SampledPath<V>& f, double p) {
  detail::require_norm_exponent(p);
  const int n = f.n_steps();
  const double tau = f.grid.tau;
  if (std::isinf(p)) {
    double m = 0.0;
    for (int k = 1; k <= n; ++k) m = std::max(m, vnorm(f[k] - f[k - 1]));
    return m;
  }
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    acc += tau / (p + 1.0) * std::pow(vnorm(f[k] - f[k - 1]), p);
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace fracpde
