// Discrete Caputo weights: the lambda recurrence and its invariants.
//
// lambda_1 = 1 and
//   lambda_{k+1} = sum_{j=1}^{k} ((k-j+1)^{a-1} - (k-j+2)^{a-1}) lambda_j,
// with a the fractional order. For a = 1 the sequence degenerates to
// (1, 0, 0, ...) and the discrete derivative becomes the backward
// difference; that case is built exactly rather than via the recurrence.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fracpde {

/// Fractional order alpha in (0, 1].
struct FractionalOrder {
  double alpha;

  explicit FractionalOrder(double a) : alpha(a) {
    if (!(a > 0.0) || a > 1.0) {
      throw std::invalid_argument("FractionalOrder: alpha must be in (0, 1]");
    }
  }
};

/// Uniform time grid t_k = k * tau, k = 0..n_steps.
struct TimeGrid {
  double tau;
  int n_steps;

  TimeGrid(double tau_, int n_steps_) : tau(tau_), n_steps(n_steps_) {
    if (!(tau > 0.0)) throw std::invalid_argument("TimeGrid: tau must be > 0");
    if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
  }

  double horizon() const { return tau * n_steps; }
  double t(int k) const { return tau * k; }
};

/// lambda_1..lambda_n for a given order. lambdas[k-1] holds lambda_k.
struct CaputoWeights {
  FractionalOrder order;
  std::vector<double> lambdas;

  int n() const { return static_cast<int>(lambdas.size()); }
  double lambda(int k) const { return lambdas[static_cast<std::size_t>(k) - 1]; }
};

inline constexpr int kDefaultWeightCap = 100000;

/// Builds lambda_1..lambda_n by the O(n^2) recurrence. The increment
/// table d_m = m^{a-1} - (m+1)^{a-1} is precomputed; every summand is
/// positive, so the accumulation is cancellation-free.
inline CaputoWeights build_weights(FractionalOrder order, int n,
                                   int cap = kDefaultWeightCap) {
  if (n < 1) throw std::invalid_argument("build_weights: n must be >= 1");
  if (n > cap) {
    throw std::invalid_argument(
        "build_weights: n exceeds the cap (O(n^2) build; raise cap to force)");
  }
  std::vector<double> lam(static_cast<std::size_t>(n));
  lam[0] = 1.0;
  if (order.alpha == 1.0) {
    for (int k = 1; k < n; ++k) lam[static_cast<std::size_t>(k)] = 0.0;
    return {order, std::move(lam)};
  }
  const double am1 = order.alpha - 1.0;
  std::vector<double> d(static_cast<std::size_t>(n) + 1);
  double prev = 1.0;  // 1^{a-1}
  for (int m = 1; m <= n; ++m) {
    const double next = std::pow(static_cast<double>(m + 1), am1);
    d[static_cast<std::size_t>(m)] = prev - next;
    prev = next;
  }
  for (int k = 1; k < n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) {
      acc += d[static_cast<std::size_t>(k - j + 1)] *
             lam[static_cast<std::size_t>(j - 1)];
    }
    lam[static_cast<std::size_t>(k)] = acc;
  }
  return {order, std::move(lam)};
}

/// Max over i = 1..n of |sum_{j=1}^i (i-j+1)^{a-1} lambda_j - 1|.
/// The scheme's key identity; everything downstream (discrete FTC,
/// shift bounds) rests on it holding to ~1e-10.
inline double weight_identity_max_error(const CaputoWeights& w) {
  const int n = w.n();
  const double am1 = w.order.alpha - 1.0;
  std::vector<double> pw(static_cast<std::size_t>(n) + 1);
  for (int m = 1; m <= n; ++m) {
    pw[static_cast<std::size_t>(m)] = std::pow(static_cast<double>(m), am1);
  }
  double worst = 0.0;
  for (int i = 1; i <= n; ++i) {
    double acc = 0.0;
    for (int j = 1; j <= i; ++j) {
      acc += pw[static_cast<std::size_t>(i - j + 1)] * w.lambda(j);
    }
    worst = std::max(worst, std::abs(acc - 1.0));
  }
  return worst;
}

/// True iff lambda_{k+1} < lambda_k for every k < n (strict for alpha < 1).
inline bool weights_strictly_decreasing(const CaputoWeights& w) {
  for (int k = 1; k < w.n(); ++k) {
    if (!(w.lambda(k + 1) < w.lambda(k))) return false;
  }
  return true;
}

/// True iff lambda_k <= k^{-a} and sum_{j<=k} lambda_j <= k^{1-a} for all k.
inline bool weights_decay_bounds_hold(const CaputoWeights& w) {
  const double a = w.order.alpha;
  double partial = 0.0;
  for (int k = 1; k <= w.n(); ++k) {
    partial += w.lambda(k);
    if (w.lambda(k) > std::pow(static_cast<double>(k), -a)) return false;
    if (partial > std::pow(static_cast<double>(k), 1.0 - a)) return false;
  }
  return true;
}

/// Piecewise-constant weight density tau^{-a} lambda_{ceil(t/tau)} on
/// (0, n*tau]. Converges weakly to t^{-a} / (Gamma(a) Gamma(1-a)).
inline double weight_density(const CaputoWeights& w, double tau, double t) {
  const double horizon = tau * w.n();
  if (!(t > 0.0) || t > horizon) {
    throw std::out_of_range("weight_density: t outside (0, horizon]");
  }
  const int j = static_cast<int>(std::ceil(t / tau));
  const int clamped = std::min(std::max(j, 1), w.n());
  return std::pow(tau, -w.order.alpha) * w.lambda(clamped);
}

}  // namespace fracpde
