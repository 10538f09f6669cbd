#pragma once

// Nucleation rate per Hubble volume per Hubble time, eps = lambda0 / H^4,
// anchored at t_p, and Garriga's de Sitter pair density.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fvinf/dynamics.hpp"
#include "fvinf/errors.hpp"

namespace fvinf {

struct NucleationParams {
  /// Unset means "calibrate so that eps(t_p) = 1".
  std::optional<double> lambda0;
  double E0 = 0.0;
  /// Euclidean bounce action, taken as given.
  double S_E = 0.0;
  double M = 1.0;
  /// The undefined "e" multiplying E0^2 / H^2; Euler's number unless overridden.
  double e_coeff = std::numbers::e;
};

inline std::vector<std::string> violations(const NucleationParams& n, double M_p) {
  std::vector<std::string> v;
  if (n.lambda0 && !(*n.lambda0 >= 0)) v.emplace_back("lambda0 >= 0");
  if (!(n.S_E >= 0) || !std::isfinite(n.S_E)) v.emplace_back("S_E >= 0");
  if (!(n.M > 0) || !std::isfinite(n.M)) v.emplace_back("M > 0");
  if (n.M > M_p) v.emplace_back("M <= M_p");
  if (!std::isfinite(n.E0)) v.emplace_back("E0 finite");
  if (!std::isfinite(n.e_coeff)) v.emplace_back("e_coeff finite");
  return v;
}

inline double epsilon(double lambda0, double H) {
  if (!(H > 0.0)) throw ValidationError({"H > 0"});
  const double H2 = H * H;
  return lambda0 / (H2 * H2);
}

/// lambda0 = H(t_p)^4, so that eps(t_p) = 1.
inline double calibrate_lambda0(double H_at_tp) {
  if (!(H_at_tp > 0.0)) throw ValidationError({"H_at_tp > 0"});
  const double H2 = H_at_tp * H_at_tp;
  return H2 * H2;
}

/// (1 / 2 pi) sqrt(M^2 + e E0^2 / H^2) exp(-S_E)
inline double garriga_density(const NucleationParams& n, double H) {
  if (!(H > 0.0)) throw ValidationError({"H > 0"});
  const double arg = n.M * n.M + n.e_coeff * n.E0 * n.E0 / (H * H);
  if (arg < 0.0) throw ValidationError({"M^2 + e E0^2 / H^2 >= 0"});
  return std::sqrt(arg) * std::exp(-n.S_E) / (2.0 * std::numbers::pi);
}

struct RateColumn {
  double lambda0;
  bool auto_calibrated;
  /// Sample used for calibration (first t >= t_p); unset when lambda0 was given.
  std::optional<std::size_t> anchor;
  std::vector<double> epsilon;
};

inline RateColumn rate_series(const TimeSeries& ts, const NucleationParams& n, double t_p) {
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (!(ts.states[i].H > 0.0)) {
      bad.push_back("H > 0 at sample " + std::to_string(i) + " (t = " + std::to_string(ts.states[i].t) + ")");
      break;
    }
  if (!bad.empty()) throw ValidationError(std::move(bad));

  RateColumn col{0.0, false, std::nullopt, {}};
  if (n.lambda0) {
    col.lambda0 = *n.lambda0;
  } else {
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (ts.states[i].t >= t_p) {
        col.anchor = i;
        break;
      }
    if (!col.anchor) throw ValidationError({"a sample with t >= t_p for lambda0 calibration"});
    col.lambda0 = calibrate_lambda0(ts.states[*col.anchor].H);
    col.auto_calibrated = true;
  }
  col.epsilon.reserve(ts.size());
  for (const auto& s : ts.states) col.epsilon.push_back(epsilon(col.lambda0, s.H));
  return col;
}

/// Copy of the series carrying the rate column.
inline TimeSeries with_rate(TimeSeries ts, const RateColumn& col) {
  ts.epsilon = col.epsilon;
  return ts;
}

struct RateBoundCheck {
  bool holds = true;
  double H4_anchor = 0.0;
  double max_H4_after = 0.0;
  std::size_t violations = 0;
};

/// H^4(t) <= H^4(t_p) for every sample after the first sample with t >= t_p.
inline RateBoundCheck check_rate_bound(const TimeSeries& ts, double t_p) {
  RateBoundCheck c;
  std::optional<std::size_t> anchor;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts.states[i].t >= t_p) {
      anchor = i;
      break;
    }
  if (!anchor) throw ValidationError({"a sample with t >= t_p"});
  auto h4 = [](double H) { return H * H * H * H; };
  c.H4_anchor = h4(ts.states[*anchor].H);
  for (std::size_t i = *anchor + 1; i < ts.size(); ++i) {
    const double v = h4(ts.states[i].H);
    c.max_H4_after = std::max(c.max_H4_after, v);
    if (v > c.H4_anchor) {
      c.holds = false;
      ++c.violations;
    }
  }
  return c;
}

}  // namespace fvinf
