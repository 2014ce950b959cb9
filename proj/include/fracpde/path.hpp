// Uniformly sampled paths over a generic normed value space.
//
// A value space V needs V+V, V-V, double*V and a free function
// vnorm(V) -> double found by ADL. Scalars and GridField both qualify;
// the zero element of V is obtained as 0.0 * v.
#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracpde/weights.hpp"

namespace fracpde {

inline double vnorm(double x) { return std::abs(x); }

template <class V>
struct SampledPath {
  TimeGrid grid;
  std::vector<V> values;  // v_0..v_N, v_0 is the initial value

  SampledPath(TimeGrid g, std::vector<V> vals)
      : grid(g), values(std::move(vals)) {
    if (values.size() != static_cast<std::size_t>(grid.n_steps) + 1) {
      throw std::invalid_argument("SampledPath: need n_steps + 1 values");
    }
  }

  int n_steps() const { return grid.n_steps; }
  const V& operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
  V& operator[](int k) { return values[static_cast<std::size_t>(k)]; }
};

using ScalarPath = SampledPath<double>;

/// Samples f on the grid: values f(0), f(tau), ..., f(T).
template <class F>
ScalarPath sample_scalar(const TimeGrid& grid, F&& f) {
  std::vector<double> vals(static_cast<std::size_t>(grid.n_steps) + 1);
  for (int k = 0; k <= grid.n_steps; ++k) vals[static_cast<std::size_t>(k)] = f(grid.t(k));
  return {grid, std::move(vals)};
}

}  // namespace fracpde
