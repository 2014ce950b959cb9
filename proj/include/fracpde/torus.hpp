// Periodic torus fields and spectral operators.
//
// Conventions (used everywhere, no rescaling anywhere):
//   * domain [0, 2*pi)^d, d in {1,2,3}, M nodes per dimension, x_i = 2*pi*i/M;
//   * integer wavenumbers n in {-M/2, ..., M/2-1}^d;
//   * forward transform carries 1/M^d, so uhat(n) = (1/(2pi)^d) int u e^{-inx}
//     exactly for band-limited fields;
//   * (-Delta)^s is the Fourier multiplier |n|^{2s}, zero on the mean mode;
//   * gradient/divergence zero the Nyquist plane (|n_j| = M/2) so that real
//     fields stay real.
// Nonlinear terms are formed pointwise on nodes and dealiased by the
// two-thirds rule (zero every mode with any 3|n_i| > M).
#pragma once

#include <fftw3.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fracpde/path.hpp"

namespace fracpde {

struct TorusGrid {
  int dim;
  int points;  // M, nodes per dimension

  TorusGrid(int dim_, int points_) : dim(dim_), points(points_) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("TorusGrid: dim in {1,2,3}");
    if (points < 8 || points % 2 != 0) {
      throw std::invalid_argument("TorusGrid: points must be even and >= 8");
    }
  }

  bool operator==(const TorusGrid& o) const {
    return dim == o.dim && points == o.points;
  }

  std::size_t total() const {
    std::size_t t = 1;
    for (int i = 0; i < dim; ++i) t *= static_cast<std::size_t>(points);
    return t;
  }
  double spacing() const { return 2.0 * std::numbers::pi / points; }
  /// Node quadrature weight (2*pi/M)^d.
  double cell_volume() const { return std::pow(spacing(), dim); }
  double volume() const { return std::pow(2.0 * std::numbers::pi, dim); }

  /// Signed wavenumber of flat index component i in [0, M).
  int freq(int i) const { return i < points / 2 ? i : i - points; }

  /// Decomposes a flat row-major index into per-dimension indices.
  std::array<int, 3> unflatten(std::size_t flat) const {
    std::array<int, 3> idx = {0, 0, 0};
    for (int d = dim - 1; d >= 0; --d) {
      idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % points);
      flat /= static_cast<std::size_t>(points);
    }
    return idx;
  }
};

struct GridField {
  TorusGrid grid;
  std::vector<double> samples;  // row-major over nodes

  GridField(TorusGrid g, std::vector<double> s)
      : grid(g), samples(std::move(s)) {
    if (samples.size() != grid.total()) {
      throw std::invalid_argument("GridField: sample count mismatch");
    }
  }
  explicit GridField(TorusGrid g) : grid(g), samples(g.total(), 0.0) {}
};

struct Spectrum {
  TorusGrid grid;
  std::vector<std::complex<double>> coeff;  // FFTW order, row-major

  explicit Spectrum(TorusGrid g) : grid(g), coeff(g.total()) {}
};

struct VectorField {
  std::vector<GridField> comp;  // dim components on one grid
};

namespace detail {
inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

inline void run_fft(const TorusGrid& g, std::vector<std::complex<double>>& buf,
                    int sign) {
  int dims[3] = {g.points, g.points, g.points};
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan = fftw_plan_dft(g.dim, dims, data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }
}
}  // namespace detail

inline Spectrum to_spectrum(const GridField& f) {
  Spectrum out(f.grid);
  for (std::size_t i = 0; i < f.samples.size(); ++i) out.coeff[i] = f.samples[i];
  detail::run_fft(f.grid, out.coeff, FFTW_FORWARD);
  const double inv = 1.0 / static_cast<double>(f.grid.total());
  for (auto& c : out.coeff) c *= inv;
  return out;
}

inline GridField to_field(const Spectrum& s) {
  std::vector<std::complex<double>> buf = s.coeff;
  detail::run_fft(s.grid, buf, FFTW_BACKWARD);
  GridField out(s.grid);
  for (std::size_t i = 0; i < buf.size(); ++i) out.samples[i] = buf[i].real();
  return out;
}

// ---- field arithmetic -------------------------------------------------

inline GridField operator+(const GridField& a, const GridField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("GridField+: grid mismatch");
  GridField out(a.grid);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = a.samples[i] + b.samples[i];
  }
  return out;
}

inline GridField operator-(const GridField& a, const GridField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("GridField-: grid mismatch");
  GridField out(a.grid);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = a.samples[i] - b.samples[i];
  }
  return out;
}

inline GridField operator*(double c, const GridField& a) {
  GridField out(a.grid);
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] = c * a.samples[i];
  return out;
}

/// Pointwise product on nodes (no dealiasing here).
inline GridField pointwise(const GridField& a, const GridField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("pointwise: grid mismatch");
  GridField out(a.grid);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = a.samples[i] * b.samples[i];
  }
  return out;
}

inline GridField positive_part(const GridField& a) {
  GridField out(a.grid);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = a.samples[i] > 0.0 ? a.samples[i] : 0.0;
  }
  return out;
}

inline double mean(const GridField& f) {
  double acc = 0.0;
  for (double v : f.samples) acc += v;
  return acc / static_cast<double>(f.grid.total());
}

inline double min_value(const GridField& f) {
  double m = f.samples[0];
  for (double v : f.samples) m = std::min(m, v);
  return m;
}

// ---- spectral operators ----------------------------------------------

/// Fractional Laplacian (-Delta)^s: multiplier |n|^{2s}, zero mean mode.
inline GridField frac_laplacian(const GridField& f, double s) {
  if (!(s > 0.0) || s > 1.0) {
    throw std::invalid_argument("frac_laplacian: s must be in (0, 1]");
  }
  Spectrum sp = to_spectrum(f);
  for (std::size_t i = 0; i < sp.coeff.size(); ++i) {
    const auto idx = sp.grid.unflatten(i);
    double n2 = 0.0;
    for (int d = 0; d < sp.grid.dim; ++d) {
      const double n = sp.grid.freq(idx[static_cast<std::size_t>(d)]);
      n2 += n * n;
    }
    sp.coeff[i] *= n2 > 0.0 ? std::pow(n2, s) : 0.0;
  }
  return to_field(sp);
}

/// Spectral partial derivative along axis; Nyquist plane zeroed.
inline Spectrum derivative_spectrum(const Spectrum& sp, int axis) {
  Spectrum out = sp;
  const int m = sp.grid.points;
  for (std::size_t i = 0; i < out.coeff.size(); ++i) {
    const auto idx = sp.grid.unflatten(i);
    const int ni = idx[static_cast<std::size_t>(axis)];
    if (ni == m / 2) {
      out.coeff[i] = 0.0;
    } else {
      out.coeff[i] *= std::complex<double>(0.0, sp.grid.freq(ni));
    }
  }
  return out;
}

inline VectorField gradient(const GridField& f) {
  const Spectrum sp = to_spectrum(f);
  VectorField out;
  for (int d = 0; d < f.grid.dim; ++d) {
    out.comp.push_back(to_field(derivative_spectrum(sp, d)));
  }
  return out;
}

inline GridField divergence(const VectorField& v) {
  if (v.comp.empty()) throw std::invalid_argument("divergence: empty field");
  const TorusGrid grid = v.comp[0].grid;
  if (static_cast<int>(v.comp.size()) != grid.dim) {
    throw std::invalid_argument("divergence: component count mismatch");
  }
  Spectrum acc(grid);
  for (int d = 0; d < grid.dim; ++d) {
    const Spectrum der = derivative_spectrum(to_spectrum(v.comp[static_cast<std::size_t>(d)]), d);
    for (std::size_t i = 0; i < acc.coeff.size(); ++i) acc.coeff[i] += der.coeff[i];
  }
  return to_field(acc);
}

inline GridField laplacian(const GridField& f) {
  Spectrum sp = to_spectrum(f);
  for (std::size_t i = 0; i < sp.coeff.size(); ++i) {
    const auto idx = sp.grid.unflatten(i);
    double n2 = 0.0;
    for (int d = 0; d < sp.grid.dim; ++d) {
      const double n = sp.grid.freq(idx[static_cast<std::size_t>(d)]);
      n2 += n * n;
    }
    sp.coeff[i] *= -n2;
  }
  return to_field(sp);
}

/// L^p norm by node quadrature, p in {1, 2, 3, inf}.
inline double lp_norm(const GridField& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.samples) m = std::max(m, std::abs(v));
    return m;
  }
  if (p != 1.0 && p != 2.0 && p != 3.0) {
    throw std::invalid_argument("lp_norm: p must be 1, 2, 3 or inf");
  }
  double acc = 0.0;
  for (double v : f.samples) acc += std::pow(std::abs(v), p);
  return std::pow(acc * f.grid.cell_volume(), 1.0 / p);
}

/// H^s seminorm |(-Delta)^{s/2} f|_{L^2} via Parseval.
inline double hs_seminorm(const GridField& f, double s) {
  const Spectrum sp = to_spectrum(f);
  double acc = 0.0;
  for (std::size_t i = 0; i < sp.coeff.size(); ++i) {
    const auto idx = sp.grid.unflatten(i);
    double n2 = 0.0;
    for (int d = 0; d < sp.grid.dim; ++d) {
      const double n = sp.grid.freq(idx[static_cast<std::size_t>(d)]);
      n2 += n * n;
    }
    if (n2 > 0.0) acc += std::pow(n2, s) * std::norm(sp.coeff[i]);
  }
  return std::sqrt(acc * f.grid.volume());
}

inline double l2_inner(const GridField& a, const GridField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("l2_inner: grid mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) acc += a.samples[i] * b.samples[i];
  return acc * a.grid.cell_volume();
}

/// H[u, p] = int u^2 + (1/2)|grad p|^2 by node quadrature.
inline double energy(const GridField& u, const GridField& p) {
  if (!(u.grid == p.grid)) throw std::invalid_argument("energy: grid mismatch");
  const double u2 = lp_norm(u, 2.0);
  double grad2 = 0.0;
  const VectorField gp = gradient(p);
  for (const auto& c : gp.comp) {
    const double g = lp_norm(c, 2.0);
    grad2 += g * g;
  }
  return u2 * u2 + 0.5 * grad2;
}

/// Two-thirds rule: zeroes every mode with any 3|n_i| > M.
inline Spectrum dealias(const Spectrum& sp) {
  Spectrum out = sp;
  const int m = sp.grid.points;
  for (std::size_t i = 0; i < out.coeff.size(); ++i) {
    const auto idx = sp.grid.unflatten(i);
    for (int d = 0; d < sp.grid.dim; ++d) {
      if (3 * std::abs(sp.grid.freq(idx[static_cast<std::size_t>(d)])) > m) {
        out.coeff[i] = 0.0;
        break;
      }
    }
  }
  return out;
}

/// L^2 norm for the generic path machinery.
inline double vnorm(const GridField& f) { return lp_norm(f, 2.0); }

}  // namespace fracpde
