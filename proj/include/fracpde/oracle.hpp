// Continuous-time Caputo reference implementations, used as independent
// oracles for the discrete operators. All integrals with a weakly
// singular kernel go through the power-graded composite Gauss rule.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fracpde/gamma.hpp"
#include "fracpde/quadrature.hpp"
#include "fracpde/rng.hpp"

namespace fracpde {

/// Closed-form pair (f, f') supplied by the caller; f' must be the exact
/// derivative of f (spot-check with derivative_spot_check).
struct SmoothFunction {
  std::function<double(double)> f;
  std::function<double(double)> fp;
};

/// Max over `points` random t in (0, T) of the central-difference error
/// of fp against f. Caller contract check, tolerance ~1e-6.
inline double derivative_spot_check(const SmoothFunction& fn, double T,
                                    int points = 5, std::uint64_t seed = 42) {
  Xoshiro256 rng(seed);
  const double h = 1e-6 * T;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = rng.uniform(h, T - h);
    const double fd = (fn.f(t + h) - fn.f(t - h)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - fn.fp(t)));
  }
  return worst;
}

struct OracleOptions {
  int cells = 256;                  // composite cells per smooth piece
  std::vector<double> breakpoints;  // known kinks of f' in (0, T)
};

namespace detail {
/// int_0^L u^{-strength-ish} psi(u) du with psi integrable at 0 and
/// possibly kinked at L - b for breakpoints b; the singular piece next
/// to 0 gets the graded rule, the rest plain composite Gauss.
template <class F>
double split_singular_integral(F&& psi, double L, double t_origin,
                               double grading, const OracleOptions& opt) {
  // kinks of psi in u-coordinates (u = t_origin - s or s - t_origin)
  std::vector<double> cuts;
  for (double b : opt.breakpoints) {
    const double u = t_origin - b;
    if (u > 0.0 && u < L) cuts.push_back(u);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(L);
  double acc = integrate_graded(psi, cuts.front(), grading, opt.cells);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    acc += composite_gauss4(psi, cuts[i], cuts[i + 1], opt.cells);
  }
  return acc;
}
}  // namespace detail

/// D^a f(t) = (1/Gamma(1-a)) int_0^t f'(s) (t-s)^{-a} ds.
inline double continuous_left_caputo(const SmoothFunction& fn, double t,
                                     double alpha,
                                     const OracleOptions& opt = {}) {
  if (!(t > 0.0)) throw std::domain_error("continuous_left_caputo: t <= 0");
  if (!(alpha > 0.0) || alpha >= 1.0) {
    throw std::domain_error("continuous_left_caputo: alpha in (0,1)");
  }
  auto psi = [&](double u) { return std::pow(u, -alpha) * fn.fp(t - u); };
  const double grading = 8.0 / (1.0 - alpha);
  return detail::split_singular_integral(psi, t, t, grading, opt) /
         gamma_fn(1.0 - alpha);
}

/// Alternate form: (1/Gamma(1-a)) [ (f(t)-f(0)) t^{-a}
///   + a int_0^t (f(t)-f(s)) (t-s)^{-1-a} ds ].
inline double continuous_left_caputo_alt(const SmoothFunction& fn, double t,
                                         double alpha,
                                         const OracleOptions& opt = {}) {
  if (!(t > 0.0)) throw std::domain_error("continuous_left_caputo_alt: t <= 0");
  auto psi = [&](double u) {
    return std::pow(u, -1.0 - alpha) * (fn.f(t) - fn.f(t - u));
  };
  const double grading = 8.0 / (1.0 - alpha);
  const double tail = detail::split_singular_integral(psi, t, t, grading, opt);
  return ((fn.f(t) - fn.f(0.0)) * std::pow(t, -alpha) + alpha * tail) /
         gamma_fn(1.0 - alpha);
}

/// *D^a f(t) = (1/Gamma(1-a)) int_t^T f'(s) (s-t)^{-a} ds.
inline double continuous_right_caputo(const SmoothFunction& fn, double t,
                                      double alpha, double T,
                                      const OracleOptions& opt = {}) {
  if (!(t < T)) throw std::domain_error("continuous_right_caputo: t >= T");
  auto psi = [&](double u) { return std::pow(u, -alpha) * fn.fp(t + u); };
  // kinks at s = b map to u = b - t here
  std::vector<double> cuts;
  for (double b : opt.breakpoints) {
    const double u = b - t;
    if (u > 0.0 && u < T - t) cuts.push_back(u);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(T - t);
  const double grading = 8.0 / (1.0 - alpha);
  double acc = integrate_graded(psi, cuts.front(), grading, opt.cells);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    acc += composite_gauss4(psi, cuts[i], cuts[i + 1], opt.cells);
  }
  return acc / gamma_fn(1.0 - alpha);
}

/// Alternate form of the right derivative.
inline double continuous_right_caputo_alt(const SmoothFunction& fn, double t,
                                          double alpha, double T,
                                          const OracleOptions& opt = {}) {
  if (!(t < T)) throw std::domain_error("continuous_right_caputo_alt: t >= T");
  auto psi = [&](double u) {
    return std::pow(u, -1.0 - alpha) * (fn.f(t + u) - fn.f(t));
  };
  const double grading = 8.0 / (1.0 - alpha);
  const double tail = integrate_graded(psi, T - t, grading, opt.cells);
  return ((fn.f(T) - fn.f(t)) * std::pow(T - t, -alpha) + alpha * tail) /
         gamma_fn(1.0 - alpha);
}

/// | f(t) - f(0) - (1/Gamma(a)) int_0^t (t-s)^{a-1} D^a f(s) ds |
/// with the inner Caputo values from continuous_left_caputo.
inline double continuous_ftc_residual(const SmoothFunction& fn, double t,
                                      double alpha,
                                      const OracleOptions& opt = {}) {
  if (!(t > 0.0)) throw std::domain_error("continuous_ftc_residual: t <= 0");
  OracleOptions inner = opt;
  inner.cells = std::max(64, opt.cells / 2);
  auto psi = [&](double u) {
    return std::pow(u, alpha - 1.0) *
           continuous_left_caputo(fn, t - u, alpha, inner);
  };
  // psi(t) needs D^a f(0+) = 0 for absolutely continuous f; cap u below t.
  auto psi_safe = [&](double u) { return u < t ? psi(u) : 0.0; };
  const double grading = 8.0 / alpha;
  const double integral = integrate_graded(psi_safe, t, grading, 128);
  return std::abs(fn.f(t) - fn.f(0.0) - integral / gamma_fn(alpha));
}

/// Absolute residual of the three-term continuous integration-by-parts
/// identity
///   int_0^T D^a f phi = -int_0^T f *D^a phi
///     + phi(T)/Gamma(1-a) int_0^T f (T-t)^{-a}
///     - f(0)/Gamma(1-a) int_0^T phi s^{-a}.
inline double ibp_continuous_residual(const SmoothFunction& f,
                                      const SmoothFunction& phi, double alpha,
                                      double T, const OracleOptions& opt = {}) {
  OracleOptions inner = opt;
  inner.cells = std::max(64, opt.cells / 2);
  const double grading = 8.0 / (1.0 - alpha);

  auto lhs_psi = [&](double u) {
    return u < T ? continuous_left_caputo(f, u, alpha, inner) * phi.f(u) : 0.0;
  };
  const double lhs = integrate_graded(lhs_psi, T, grading, 128);

  auto rhs1_psi = [&](double z) {
    return z > 0.0 ? f.f(T - z) * continuous_right_caputo(phi, T - z, alpha, T, inner)
                   : 0.0;
  };
  const double rhs1 = -integrate_graded(rhs1_psi, T, grading, 128);

  auto rhs2_psi = [&](double z) { return f.f(T - z) * std::pow(z, -alpha); };
  const double rhs2 =
      phi.f(T) / gamma_fn(1.0 - alpha) * integrate_graded(rhs2_psi, T, grading, 256);

  auto rhs3_psi = [&](double s) { return phi.f(s) * std::pow(s, -alpha); };
  const double rhs3 =
      f.f(0.0) / gamma_fn(1.0 - alpha) * integrate_graded(rhs3_psi, T, grading, 256);

  return std::abs(lhs - (rhs1 + rhs2 - rhs3));
}

}  // namespace fracpde
