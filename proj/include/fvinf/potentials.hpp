#pragma once

// Three-regime inflaton potential: a tilted sine-Gordon well (R1), a
// pole-damped quadratic (R2) and the chaotic-inflation quadratic (R3),
// plus the chaotic-inflation anchor values and the time schedule.
//
// Units are Planck units throughout (M_p = G = t_p = 1 by default).

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fvinf/errors.hpp"

namespace fvinf {

enum class Regime { R1 = 1, R2 = 2, R3 = 3 };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::R1: return "R1";
    case Regime::R2: return "R2";
    case Regime::R3: return "R3";
  }
  return "?";
}

inline int index(Regime r) { return static_cast<int>(r); }

struct ModelParams {
  double M_p = 1.0;
  double m = 0.01;
  /// Coefficient of the phi^3 term in the R2 denominator.
  double A = 0.0;
  /// Unset means "derive from the classical/quantum crossover value".
  std::optional<double> phi_star;
  double phi0_tilde = 3.5;
  double G = 1.0;
  /// Constant initial energy density, added in R1 only.
  double rho_init = 0.0;
  double t_p = 1.0;
  /// Buffer after t_p at which the post-nucleation rate bound is checked.
  double delta_t = 0.1;
  /// Length of the R2 window after t_p; unset means 10 * t_p.
  std::optional<double> window_r2;
};

/// Human-readable names of every violated invariant, empty when valid.
inline std::vector<std::string> violations(const ModelParams& p) {
  std::vector<std::string> out;
  auto bad = [](double x) { return !std::isfinite(x); };
  if (bad(p.M_p) || !(p.M_p > 0)) out.emplace_back("M_p > 0");
  if (bad(p.m) || !(p.m > 0)) out.emplace_back("m > 0");
  if (p.m > 0 && p.M_p > 0 && !(p.m < p.M_p)) out.emplace_back("m < M_p");
  if (bad(p.G) || !(p.G > 0)) out.emplace_back("G > 0");
  if (bad(p.t_p) || !(p.t_p > 0)) out.emplace_back("t_p > 0");
  if (bad(p.delta_t) || !(p.delta_t > 0)) out.emplace_back("delta_t > 0");
  if (bad(p.rho_init) || !(p.rho_init >= 0)) out.emplace_back("rho_init >= 0");
  if (bad(p.A) || !(p.A >= 0)) out.emplace_back("A >= 0");
  if (bad(p.phi0_tilde)) out.emplace_back("phi0_tilde finite");
  if (p.phi_star && bad(*p.phi_star)) out.emplace_back("phi_star finite");
  if (p.window_r2 && (bad(*p.window_r2) || !(*p.window_r2 > 0))) out.emplace_back("window_r2 > 0");
  return out;
}

inline void validate(const ModelParams& p) {
  if (auto v = violations(p); !v.empty()) throw ValidationError(std::move(v));
}

/// Field value where classical drift and quantum jitter are comparable:
/// (3 / 16 pi)^(1/4) * M_p^(3/2) / m^(1/2).
inline double phi_star(const ModelParams& p) {
  if (!(p.m > 0) || !(p.M_p > 0)) throw ValidationError({"m > 0"});
  return std::pow(3.0 / (16.0 * std::numbers::pi), 0.25) * std::pow(p.M_p, 1.5) /
         std::sqrt(p.m);
}

inline double resolved_phi_star(const ModelParams& p) {
  return p.phi_star ? *p.phi_star : phi_star(p);
}

inline double resolved_window_r2(const ModelParams& p) {
  return p.window_r2 ? *p.window_r2 : 10.0 * p.t_p;
}

/// Lower bound on the initial inflaton value for ~60 e-folds: sqrt(60 / 2 pi) * M_p.
inline double phi0_threshold(const ModelParams& p) {
  return std::sqrt(60.0 / (2.0 * std::numbers::pi)) * p.M_p;
}

inline bool exceeds_threshold(double phi0, const ModelParams& p) {
  return phi0 > phi0_threshold(p);
}

namespace detail {

inline void check_params(const ModelParams& p) {
  // Cheap gate first; the full list is only built on failure.
  if (p.M_p > 0 && p.m > 0 && p.m < p.M_p && p.G > 0 && p.t_p > 0 && p.delta_t > 0 &&
      p.rho_init >= 0 && p.A >= 0)
    return;
  validate(p);
}

inline constexpr double pole_tolerance = 1e-12;

inline double r2_denominator(double phi, const ModelParams& p) {
  const double d = 1.0 + p.A * phi * phi * phi;
  if (std::abs(d) < pole_tolerance) throw PoleError(phi);
  return d;
}

}  // namespace detail

/// Sine-Gordon part of V1 on its own; the profile the lattice kinks live in.
inline double sine_gordon_potential(double phi, double M_p) {
  return 0.5 * M_p * M_p * (1.0 - std::cos(phi));
}

inline double eval_potential(Regime regime, double phi, const ModelParams& p) {
  detail::check_params(p);
  const double m2 = p.m * p.m;
  switch (regime) {
    case Regime::R1: {
      const double shift = phi - resolved_phi_star(p);
      return p.rho_init + sine_gordon_potential(phi, p.M_p) + 0.5 * m2 * shift * shift;
    }
    case Regime::R2:
      return 0.5 * m2 * phi * phi / detail::r2_denominator(phi, p);
    case Regime::R3:
      return 0.5 * m2 * phi * phi;
  }
  return 0.0;
}

inline double eval_dpotential(Regime regime, double phi, const ModelParams& p) {
  detail::check_params(p);
  const double m2 = p.m * p.m;
  switch (regime) {
    case Regime::R1:
      return 0.5 * p.M_p * p.M_p * std::sin(phi) + m2 * (phi - resolved_phi_star(p));
    case Regime::R2: {
      const double d = detail::r2_denominator(phi, p);
      // d/dphi [ m^2 phi^2 / (2 d) ] = m^2 phi (1 - A phi^3 / 2) / d^2
      return m2 * phi * (1.0 - 0.5 * p.A * phi * phi * phi) / (d * d);
    }
    case Regime::R3:
      return m2 * phi;
  }
  return 0.0;
}

/// R1 up to and including t_p, R2 up to and including t_p + window, R3 after.
inline Regime regime_for(double t, const ModelParams& p) {
  if (t <= p.t_p) return Regime::R1;
  if (t <= p.t_p + resolved_window_r2(p)) return Regime::R2;
  return Regime::R3;
}

/// Times at which regime_for changes value, ascending.
inline std::vector<double> regime_boundaries(const ModelParams& p) {
  return {p.t_p, p.t_p + resolved_window_r2(p)};
}

}  // namespace fvinf
