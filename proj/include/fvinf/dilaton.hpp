#pragma once

// Dilaton coupling / string length relation l_p^2 / lambda_s^2 = alpha = e^phi
// and the Planck-length vs FRW-size comparison.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fvinf/errors.hpp"

namespace fvinf {

namespace constants {
/// Speed of light, cm / s (exact).
inline constexpr double c_cm_per_s = 2.99792458e10;
/// Planck time, s (CODATA 2018).
inline constexpr double planck_time_s = 5.391247e-44;
/// Size of the universe at t ~ t_p quoted from standard FRW extrapolation, cm.
inline constexpr double frw_size_cm = 1e-2;
}  // namespace constants

struct DilatonParams {
  double l_p = 1.0;
  double phi = 2.0 * std::numbers::pi;
  /// Planck time in seconds, used for the centimetre comparison.
  double t_p_SI = constants::planck_time_s;
};

inline std::vector<std::string> violations(const DilatonParams& d) {
  std::vector<std::string> v;
  if (!(d.l_p > 0) || !std::isfinite(d.l_p)) v.emplace_back("l_p > 0");
  if (!std::isfinite(d.phi)) v.emplace_back("dilaton phi finite");
  if (!(d.t_p_SI > 0) || !std::isfinite(d.t_p_SI)) v.emplace_back("t_p_SI > 0");
  return v;
}

inline double coupling_from_phi(double phi) { return std::exp(phi); }

inline double phi_from_coupling(double alpha) {
  if (!(alpha > 0)) throw ValidationError({"coupling > 0"});
  return std::log(alpha);
}

/// phi << -1; the boundary is taken at phi < -1.
inline bool weak_coupling(double phi) { return phi < -1.0; }

inline double string_length(const DilatonParams& d) {
  if (!(d.l_p > 0)) throw ValidationError({"l_p > 0"});
  return d.l_p * std::exp(-0.5 * d.phi);
}

struct FrwComparison {
  double t_p_s;
  double l_p_cm;
  double frw_size_cm;
  /// frw_size_cm / l_p_cm
  double ratio;
};

inline FrwComparison frw_size_report(double t_p_SI) {
  if (!(t_p_SI > 0) || !std::isfinite(t_p_SI)) throw ValidationError({"t_p_SI > 0"});
  const double l = constants::c_cm_per_s * t_p_SI;
  return {t_p_SI, l, constants::frw_size_cm, constants::frw_size_cm / l};
}

}  // namespace fvinf
