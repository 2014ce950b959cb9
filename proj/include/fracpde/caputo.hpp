// Discrete left/right Caputo operators, the discrete fundamental theorem
// of calculus, the discrete integration-by-parts residual, and the
// convexity gap f_k (D f)_k - (1/2)(D f^2)_k.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fracpde/gamma.hpp"
#include "fracpde/path.hpp"
#include "fracpde/quadrature.hpp"
#include "fracpde/weights.hpp"

namespace fracpde {

namespace detail {
inline void require_weights_cover(const CaputoWeights& w, int n_steps) {
  if (w.n() < n_steps) {
    throw std::invalid_argument("caputo: weight table shorter than the path");
  }
}

/// Table of m^{a-1} for m = 1..n (index m).
inline std::vector<double> power_table(double alpha, int n) {
  std::vector<double> pw(static_cast<std::size_t>(n) + 1, 0.0);
  for (int m = 1; m <= n; ++m) {
    pw[static_cast<std::size_t>(m)] = std::pow(static_cast<double>(m), alpha - 1.0);
  }
  return pw;
}
}  // namespace detail

/// (D^a_tau f)_k = Gamma(a) tau^{-a} sum_{j=0}^{k-1} lambda_{k-j} (f_{j+1} - f_j),
/// k = 1..N. Index 0 carries the zero element by convention.
template <class V>
SampledPath<V> left_caputo(const SampledPath<V>& f, const CaputoWeights& w) {
  const int n = f.n_steps();
  detail::require_weights_cover(w, n);
  const double coeff =
      gamma_fn(w.order.alpha) * std::pow(f.grid.tau, -w.order.alpha);
  std::vector<V> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(0.0 * f[0]);
  for (int k = 1; k <= n; ++k) {
    V acc = w.lambda(k) * (f[1] - f[0]);
    for (int j = 1; j < k; ++j) {
      acc = acc + w.lambda(k - j) * (f[j + 1] - f[j]);
    }
    out.push_back(coeff * acc);
  }
  return {f.grid, std::move(out)};
}

/// (*D^a_tau f)_k = Gamma(a) tau^{-a} sum_{j=k+1}^{N} lambda_{j-k} (f_j - f_{j-1}),
/// k = 0..N-1. Index N carries the zero element by convention.
template <class V>
SampledPath<V> right_caputo(const SampledPath<V>& f, const CaputoWeights& w) {
  const int n = f.n_steps();
  detail::require_weights_cover(w, n);
  const double coeff =
      gamma_fn(w.order.alpha) * std::pow(f.grid.tau, -w.order.alpha);
  std::vector<V> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) {
    V acc = w.lambda(1) * (f[k + 1] - f[k]);
    for (int j = k + 2; j <= n; ++j) {
      acc = acc + w.lambda(j - k) * (f[j] - f[j - 1]);
    }
    out.push_back(coeff * acc);
  }
  out.push_back(0.0 * f[n]);
  return {f.grid, std::move(out)};
}

/// f_n = f_in + (tau^a / Gamma(a)) sum_{k=1}^{n} (n-k+1)^{a-1} df_k.
/// df is indexed 1..N (entry 0 is ignored); exact inverse of left_caputo.
template <class V>
SampledPath<V> ftc_reconstruct_forward(const SampledPath<V>& df, const V& f_in,
                                       const CaputoWeights& w) {
  const int n = df.n_steps();
  detail::require_weights_cover(w, n);
  const double coeff =
      std::pow(df.grid.tau, w.order.alpha) / gamma_fn(w.order.alpha);
  const auto pw = detail::power_table(w.order.alpha, n);
  std::vector<V> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(f_in);
  for (int m = 1; m <= n; ++m) {
    V acc = pw[static_cast<std::size_t>(m)] * df[1];
    for (int k = 2; k <= m; ++k) {
      acc = acc + pw[static_cast<std::size_t>(m - k + 1)] * df[k];
    }
    out.push_back(f_in + coeff * acc);
  }
  return {df.grid, std::move(out)};
}

/// f_n = f_end - (tau^a / Gamma(a)) sum_{k=n}^{N-1} (k-n+1)^{a-1} rdf_k.
/// rdf is indexed 0..N-1 (entry N is ignored); inverse of right_caputo.
template <class V>
SampledPath<V> ftc_reconstruct_backward(const SampledPath<V>& rdf,
                                        const V& f_end,
                                        const CaputoWeights& w) {
  const int n = rdf.n_steps();
  detail::require_weights_cover(w, n);
  const double coeff =
      std::pow(rdf.grid.tau, w.order.alpha) / gamma_fn(w.order.alpha);
  const auto pw = detail::power_table(w.order.alpha, n);
  std::vector<V> out(static_cast<std::size_t>(n) + 1, f_end);
  for (int m = n - 1; m >= 0; --m) {
    V acc = pw[1] * rdf[m];
    for (int k = m + 1; k <= n - 1; ++k) {
      acc = acc + pw[static_cast<std::size_t>(k - m + 1)] * rdf[k];
    }
    out[static_cast<std::size_t>(m)] = f_end - coeff * acc;
  }
  return {rdf.grid, std::move(out)};
}

/// Residual of the discrete integration-by-parts identity for a
/// piecewise-constant f^{(tau)} against a test function phi:
///
///   sum_k (D^a_tau f)_k Phi_k
///     = Gamma(a) tau^{-a} [ sum_{k<N} f_k sum_{j>k} lambda_{j-k} (Phi_{j-1}-Phi_j)
///                           + Phi_N sum_j lambda_{N-j+1} f_j
///                           - f_0 sum_k lambda_k Phi_k ],
///
/// with Phi_k the exact cell integral of phi (8-point Gauss per cell,
/// exact for polynomial phi of degree <= 15).
template <class V>
double discrete_ibp_residual(const SampledPath<V>& f,
                             const std::function<double(double)>& phi,
                             const CaputoWeights& w) {
  const int n = f.n_steps();
  detail::require_weights_cover(w, n);
  const double tau = f.grid.tau;
  const double coeff = gamma_fn(w.order.alpha) * std::pow(tau, -w.order.alpha);

  std::vector<double> cell(static_cast<std::size_t>(n) + 1, 0.0);  // Phi_k
  for (int k = 1; k <= n; ++k) {
    cell[static_cast<std::size_t>(k)] = gauss8(phi, (k - 1) * tau, k * tau);
  }

  const SampledPath<V> d = left_caputo(f, w);
  V lhs = cell[1] * d[1];
  for (int k = 2; k <= n; ++k) lhs = lhs + cell[static_cast<std::size_t>(k)] * d[k];

  // -int_0^{T-tau} f^{(tau)} *D^a_tau(D^1_tau Phi)
  V inner = 0.0 * f[0];
  for (int k = 1; k <= n - 1; ++k) {
    double s = 0.0;
    for (int j = k + 1; j <= n; ++j) {
      s += w.lambda(j - k) * (cell[static_cast<std::size_t>(j) - 1] -
                              cell[static_cast<std::size_t>(j)]);
    }
    inner = inner + s * f[k];
  }
  V boundary_end = w.lambda(n) * f[1];
  for (int j = 2; j <= n; ++j) boundary_end = boundary_end + w.lambda(n - j + 1) * f[j];
  double phi_weighted = 0.0;
  for (int k = 1; k <= n; ++k) phi_weighted += w.lambda(k) * cell[static_cast<std::size_t>(k)];

  const V rhs = coeff * inner + (coeff * cell[static_cast<std::size_t>(n)]) * boundary_end -
                (coeff * phi_weighted) * f[0];
  return vnorm(lhs - rhs);
}

/// f_k (D^a_tau f)_k - (1/2) (D^a_tau f^2)_k at index k; non-negative for
/// every real path (the discrete convexity inequality).
inline double caputo_square_gap(const ScalarPath& f, const CaputoWeights& w,
                                int k) {
  const int n = f.n_steps();
  if (k < 1 || k > n) throw std::out_of_range("caputo_square_gap: index");
  detail::require_weights_cover(w, n);
  const double coeff =
      gamma_fn(w.order.alpha) * std::pow(f.grid.tau, -w.order.alpha);
  double d = 0.0, d2 = 0.0;
  for (int j = 0; j < k; ++j) {
    const double lam = w.lambda(k - j);
    d += lam * (f[j + 1] - f[j]);
    d2 += lam * (f[j + 1] * f[j + 1] - f[j] * f[j]);
  }
  return f[k] * (coeff * d) - 0.5 * (coeff * d2);
}

}  // namespace fracpde
