// Gamma function wrapper with a strict positive-argument domain.
#pragma once

#include <cmath>
#include <stdexcept>

namespace fracpde {

/// Gamma(x) for x > 0. Relative error <= 1e-12 on [0.05, 30]
/// (delegates to the platform tgamma, which is well within that).
inline double gamma_fn(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("gamma_fn: argument must be positive");
  }
  return std::tgamma(x);
}

}  // namespace fracpde
