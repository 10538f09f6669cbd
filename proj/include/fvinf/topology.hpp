#pragma once

// Kink / antikink configurations of the sine-Gordon part of V1 on a uniform
// 1-D lattice, with boundary-winding charge and lattice energy.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fvinf/errors.hpp"
#include "fvinf/potentials.hpp"

namespace fvinf {

struct LatticeGrid {
  double x0 = 0.0;
  double dx = 0.01;
  std::size_t n = 2;

  double x(std::size_t j) const { return x0 + dx * static_cast<double>(j); }
  double x_end() const { return x(n - 1); }
  double midpoint() const { return 0.5 * (x0 + x_end()); }

  /// Grid covering [lo, hi] at spacing dx (hi is rounded to the nearest node).
  static LatticeGrid spanning(double lo, double hi, double dx) {
    return {lo, dx, static_cast<std::size_t>(std::llround((hi - lo) / dx)) + 1};
  }
};

struct LatticeField {
  double x0 = 0.0;
  double dx = 0.01;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double x(std::size_t j) const { return x0 + dx * static_cast<double>(j); }
};

inline void validate(const LatticeField& f) {
  std::vector<std::string> v;
  if (f.values.size() < 2) v.emplace_back("at least 2 samples");
  if (!(f.dx > 0) || !std::isfinite(f.dx)) v.emplace_back("dx > 0");
  for (double x : f.values)
    if (!std::isfinite(x)) {
      v.emplace_back("values finite");
      break;
    }
  if (!v.empty()) throw ValidationError(std::move(v));
}

namespace detail {

// dphi/dx = s * sqrt(2 V_SG(phi)) with V_SG = (scale^2 / 2)(1 - cos phi),
// written as sqrt(2) scale |sin(phi / 2)| to keep the tails accurate.
inline double bps_slope(double phi, double scale, double sign) {
  return sign * std::numbers::sqrt2 * scale * std::abs(std::sin(0.5 * phi));
}

inline double bps_advance(double phi, double h, double scale, double sign, int substeps) {
  const double k = h / substeps;
  for (int i = 0; i < substeps; ++i) {
    const double k1 = bps_slope(phi, scale, sign);
    const double k2 = bps_slope(phi + 0.5 * k * k1, scale, sign);
    const double k3 = bps_slope(phi + 0.5 * k * k2, scale, sign);
    const double k4 = bps_slope(phi + k * k3, scale, sign);
    phi += k / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return phi;
}

inline constexpr int bps_substeps = 8;

}  // namespace detail

/// BPS kink (orientation +1, rising 0 -> 2 pi) or antikink (-1, falling
/// 2 pi -> 0), obtained by integrating the first-order equation outward from
/// phi(center) = pi.
inline LatticeField kink_profile(const LatticeGrid& grid, double center, double scale, int orientation) {
  std::vector<std::string> v;
  if (grid.n < 2 || !(grid.dx > 0) || !std::isfinite(grid.x0)) v.emplace_back("invalid grid: N >= 2, dx > 0");
  if (!(scale > 0) || !std::isfinite(scale)) v.emplace_back("scale > 0");
  if (orientation != 1 && orientation != -1) v.emplace_back("orientation = +1 or -1");
  if (!std::isfinite(center)) v.emplace_back("center finite");
  if (!v.empty()) throw ValidationError(std::move(v));

  const double sign = orientation;
  LatticeField f{grid.x0, grid.dx, std::vector<double>(grid.n)};

  // First node at or right of the center.
  const double offset = (center - grid.x0) / grid.dx;
  std::ptrdiff_t right = static_cast<std::ptrdiff_t>(std::ceil(offset));
  const auto n = static_cast<std::ptrdiff_t>(grid.n);

  // Rightward sweep.
  double phi = std::numbers::pi;
  double pos = center;
  for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(right, 0); j < n; ++j) {
    const double xj = grid.x(static_cast<std::size_t>(j));
    phi = detail::bps_advance(phi, xj - pos, scale, sign, detail::bps_substeps);
    pos = xj;
    f.values[static_cast<std::size_t>(j)] = phi;
  }
  // Leftward sweep.
  phi = std::numbers::pi;
  pos = center;
  for (std::ptrdiff_t j = std::min<std::ptrdiff_t>(right - 1, n - 1); j >= 0; --j) {
    const double xj = grid.x(static_cast<std::size_t>(j));
    phi = detail::bps_advance(phi, xj - pos, scale, sign, detail::bps_substeps);
    pos = xj;
    f.values[static_cast<std::size_t>(j)] = phi;
  }
  return f;
}

/// Kink at center - d/2 plus antikink at center + d/2, shifted by -2 pi so
/// both boundaries settle at phi = 0. Center defaults to the grid midpoint.
inline LatticeField pair_config(const LatticeGrid& grid, double separation, double scale,
                                std::optional<double> center = {}) {
  if (!(separation > 0) || !std::isfinite(separation)) throw ValidationError({"separation > 0"});
  const double c = center.value_or(grid.midpoint());
  auto kink = kink_profile(grid, c - 0.5 * separation, scale, +1);
  const auto anti = kink_profile(grid, c + 0.5 * separation, scale, -1);
  for (std::size_t j = 0; j < kink.values.size(); ++j)
    kink.values[j] += anti.values[j] - 2.0 * std::numbers::pi;
  return kink;
}

/// Boundary winding (phi_last - phi_first) / 2 pi.
inline double topological_charge(const LatticeField& field) {
  validate(field);
  return (field.values.back() - field.values.front()) / (2.0 * std::numbers::pi);
}

/// Gradient energy on links plus trapezoidal potential energy, V_SG only.
inline double field_energy(const LatticeField& field, const ModelParams& params) {
  validate(field);
  const double Mp = params.M_p;
  double e = 0.0;
  for (std::size_t j = 0; j + 1 < field.values.size(); ++j) {
    const double a = field.values[j], b = field.values[j + 1];
    const double grad = (b - a) / field.dx;
    e += (0.5 * grad * grad + 0.5 * (sine_gordon_potential(a, Mp) + sine_gordon_potential(b, Mp))) *
         field.dx;
  }
  return e;
}

/// Bogomol'nyi bound per unit charge, integral over [0, 2 pi] of sqrt(2 V_SG),
/// by composite Simpson quadrature.
inline double bogomolnyi_bound(double M_p, std::size_t intervals = 2048) {
  if (intervals % 2) ++intervals;
  const double a = 0.0, b = 2.0 * std::numbers::pi;
  const double h = (b - a) / static_cast<double>(intervals);
  auto f = [M_p](double phi) { return std::sqrt(2.0 * sine_gordon_potential(phi, M_p)); };
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < intervals; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace fvinf
