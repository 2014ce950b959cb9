// Gauss-Legendre rules and graded quadrature for weakly singular kernels.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace fracpde {

namespace detail {
// Nodes/weights on [-1, 1].
inline constexpr std::array<double, 2> kGl4Nodes = {0.3399810435848563,
                                                    0.8611363115940526};
inline constexpr std::array<double, 2> kGl4Weights = {0.6521451548625461,
                                                      0.3478548451374538};
inline constexpr std::array<double, 4> kGl8Nodes = {
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
    0.9602898564975363};
inline constexpr std::array<double, 4> kGl8Weights = {
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
    0.1012285362903763};
}  // namespace detail

/// 4-point Gauss-Legendre on [a, b].
template <class F>
double gauss4(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double dx = half * detail::kGl4Nodes[i];
    acc += detail::kGl4Weights[i] * (f(mid - dx) + f(mid + dx));
  }
  return half * acc;
}

/// 8-point Gauss-Legendre on [a, b]. Exact for polynomials of degree <= 15.
template <class F>
double gauss8(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double dx = half * detail::kGl8Nodes[i];
    acc += detail::kGl8Weights[i] * (f(mid - dx) + f(mid + dx));
  }
  return half * acc;
}

/// Composite 4-point Gauss-Legendre with m uniform cells.
template <class F>
double composite_gauss4(F&& f, double a, double b, int m) {
  double acc = 0.0;
  const double h = (b - a) / m;
  for (int j = 0; j < m; ++j) {
    acc += gauss4(f, a + j * h, a + (j + 1) * h);
  }
  return acc;
}

/// Integral over (0, L] of psi with an integrable singularity at 0.
/// Substituting u = v^grading turns the graded mesh
/// u_j = L (j/m)^grading into a uniform one, then composite 4-point
/// Gauss is applied in v. grading > 1 clusters points at the singular
/// endpoint; pick grading >= 8/(1 - strength) for a u^{-strength} kernel.
template <class F>
double integrate_graded(F&& psi, double L, double grading, int m = 256) {
  if (L <= 0.0) return 0.0;
  const double vmax = std::pow(L, 1.0 / grading);
  auto mapped = [&](double v) {
    const double u = std::pow(v, grading);
    return psi(u) * grading * std::pow(v, grading - 1.0);
  };
  return composite_gauss4(mapped, 0.0, vmax, m);
}

}  // namespace fracpde
