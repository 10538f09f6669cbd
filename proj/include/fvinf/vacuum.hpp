#pragma once

// True/false vacua of the tilted sine-Gordon potential V1, the energy gap
// between them, the Bogomol'nyi bracket bookkeeping, and the inverse problem
// of finding the masses m that produce a requested gap.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fvinf/errors.hpp"
#include "fvinf/potentials.hpp"
#include "fvinf/roots.hpp"

namespace fvinf {

enum class ExtremumKind { min, max };

inline std::string_view to_string(ExtremumKind k) { return k == ExtremumKind::min ? "min" : "max"; }

struct Extremum {
  double phi;
  double V;
  ExtremumKind kind;
};

struct ExtremaOptions {
  /// Spacing of the sign-change scan over dV1/dphi.
  double scan_step = 2e-3;
  /// Required |dV1/dphi| at a refined root.
  double gradient_tol = 1e-10;
  /// Offset used for the second-difference classification.
  double curvature_step = 1e-3;
};

inline Interval default_vacuum_window() {
  return {-std::numbers::pi, 3.0 * std::numbers::pi};
}

/// All stationary points of V1 inside the interval, sorted by phi.
inline std::vector<Extremum> find_extrema(const ModelParams& params, Interval interval,
                                          const ExtremaOptions& opt = {}) {
  validate(params);
  if (!(interval.hi > interval.lo) || !std::isfinite(interval.lo) || !std::isfinite(interval.hi))
    throw ValidationError({"interval non-empty"});

  auto V = [&](double x) { return eval_potential(Regime::R1, x, params); };
  auto dV = [&](double x) { return eval_dpotential(Regime::R1, x, params); };

  const auto cells =
      static_cast<std::size_t>(std::ceil(interval.width() / opt.scan_step));
  const auto brackets = scan_sign_changes(dV, interval, std::max<std::size_t>(cells, 1));
  if (brackets.empty())
    throw NumericError("no_extremum", "no sign change of dV1/dphi in [" +
                                          std::to_string(interval.lo) + ", " +
                                          std::to_string(interval.hi) + "]");

  std::vector<Extremum> out;
  out.reserve(brackets.size());
  for (const auto& b : brackets) {
    const double x = bisect(dV, b);
    if (!(std::abs(dV(x)) < opt.gradient_tol))
      throw NumericError("refinement", "root refinement stalled at phi = " + std::to_string(x));
    const double h = opt.curvature_step;
    const double second = V(x + h) - 2.0 * V(x) + V(x - h);
    out.push_back({x, V(x), second > 0.0 ? ExtremumKind::min : ExtremumKind::max});
  }
  std::sort(out.begin(), out.end(), [](const Extremum& a, const Extremum& b) { return a.phi < b.phi; });
  return out;
}

struct Brackets {
  double A;
  double B;
  /// (A - B) - 2 * gap; reported, never forced to zero.
  double residual;
};

/// {}_A = M_p^2 + 2 m^2, {}_B = 2 M_p^2 phi_T phi_F / 3!, compared with twice the gap.
inline Brackets bogomolnyi_brackets(const ModelParams& params, double phi_T, double phi_F) {
  const double Mp2 = params.M_p * params.M_p;
  const double a = Mp2 + 2.0 * params.m * params.m;
  const double b = 2.0 * Mp2 * phi_T * phi_F / 6.0;
  const double gap =
      eval_potential(Regime::R1, phi_F, params) - eval_potential(Regime::R1, phi_T, params);
  return {a, b, (a - b) - 2.0 * gap};
}

/// Wall length scale for a given gap, with unit proportionality constant.
inline double wall_scale(double gap) {
  if (!(gap > 0.0) || !std::isfinite(gap)) throw ValidationError({"gap > 0"});
  return 1.0 / gap;
}

inline constexpr std::string_view wall_scale_convention = "L = 1 / gap (unit proportionality constant)";

struct VacuumReport {
  double phi_F, phi_T;
  double V_F, V_T;
  double gap;
  double bracket_A, bracket_B, bracket_residual;
  double wall_scale;
  Interval window;
  std::vector<Extremum> extrema;
};

inline constexpr double degenerate_gap_tol = 1e-12;

/// True vacuum is the deepest minimum in the window; the false vacuum is the
/// lowest-lying of the remaining minima.
inline VacuumReport vacuum_report(const ModelParams& params,
                                  Interval window = default_vacuum_window(),
                                  const ExtremaOptions& opt = {}) {
  auto extrema = find_extrema(params, window, opt);
  std::vector<Extremum> minima;
  for (const auto& e : extrema)
    if (e.kind == ExtremumKind::min) minima.push_back(e);
  if (minima.size() < 2)
    throw NumericError("no_extremum", "fewer than two minima of V1 in the search window");

  std::stable_sort(minima.begin(), minima.end(),
                   [](const Extremum& a, const Extremum& b) { return a.V < b.V; });
  const Extremum& T = minima[0];
  const Extremum& F = minima[1];

  VacuumReport r{};
  r.phi_T = T.phi;
  r.phi_F = F.phi;
  r.V_T = eval_potential(Regime::R1, r.phi_T, params);
  r.V_F = eval_potential(Regime::R1, r.phi_F, params);
  r.gap = r.V_F - r.V_T;
  if (std::abs(r.gap) < degenerate_gap_tol)
    throw NumericError("degenerate_vacua", "false and true vacua are degenerate (gap < 1e-12)");
  const auto br = bogomolnyi_brackets(params, r.phi_T, r.phi_F);
  r.bracket_A = br.A;
  r.bracket_B = br.B;
  r.bracket_residual = br.residual;
  r.wall_scale = wall_scale(r.gap);
  r.window = window;
  r.extrema = std::move(extrema);
  return r;
}

struct CalibrationOptions {
  double m_lo = 1e-3;
  /// Upper end of the scan as a fraction of M_p.
  double m_hi_fraction = 0.999;
  std::size_t points = 10000;
  double gap_tol = 1e-6;
  Interval window = default_vacuum_window();
  /// 0 picks hardware_concurrency().
  unsigned threads = 0;
};

struct CalibrationResult {
  double target_gap;
  double m_lo, m_hi;
  std::size_t points;
  /// Ascending; every entry reproduces target_gap within gap_tol.
  std::vector<double> masses;
  std::vector<double> gaps;
};

/// Gap at mass m with phi_star re-derived from m; empty when the window does
/// not hold two non-degenerate minima.
inline std::optional<double> gap_for_mass(const ModelParams& base, double m, Interval window) {
  ModelParams p = base;
  p.m = m;
  p.phi_star.reset();
  try {
    return vacuum_report(p, window).gap;
  } catch (const NumericError&) {
    return std::nullopt;
  }
}

inline CalibrationResult calibrate_mass(const ModelParams& params_template, double target_gap,
                                        const CalibrationOptions& opt = {}) {
  if (!(target_gap > 0.0) || !std::isfinite(target_gap)) throw ValidationError({"target_gap > 0"});
  CalibrationResult res{target_gap, opt.m_lo, opt.m_hi_fraction * params_template.M_p, opt.points, {}, {}};
  if (opt.points < 2 || !(res.m_hi > res.m_lo) || !(res.m_lo > 0))
    throw ValidationError({"calibration scan range within (0, M_p)"});

  const std::size_t n = opt.points;
  auto m_at = [&](std::size_t i) {
    return res.m_lo + (res.m_hi - res.m_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };

  std::vector<std::optional<double>> grid(n);
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += threads) grid[i] = gap_for_mass(params_template, m_at(i), opt.window);
      });
  }

  auto accept = [&](double m) {
    auto g = gap_for_mass(params_template, m, opt.window);
    if (g && std::abs(*g - target_gap) < opt.gap_tol) {
      res.masses.push_back(m);
      res.gaps.push_back(*g);
    }
  };

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!grid[i]) continue;
    const double f0 = *grid[i] - target_gap;
    if (f0 == 0.0) {
      accept(m_at(i));
      continue;
    }
    if (!grid[i + 1]) continue;
    const double f1 = *grid[i + 1] - target_gap;
    if ((f0 < 0.0) == (f1 < 0.0) || f1 == 0.0) continue;

    double lo = m_at(i), hi = m_at(i + 1), f_lo = f0;
    bool lost = false;
    for (int it = 0; it < 200; ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      auto g = gap_for_mass(params_template, mid, opt.window);
      if (!g) {
        lost = true;
        break;
      }
      const double fm = *g - target_gap;
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0.0) == (f_lo < 0.0)) {
        lo = mid;
        f_lo = fm;
      } else {
        hi = mid;
      }
    }
    if (lost) continue;
    // Jumps in gap(m) (minima appearing or vanishing) also bracket a sign
    // change; re-verification rejects them.
    accept(lo);
  }
  if (grid[n - 1] && *grid[n - 1] == target_gap) accept(m_at(n - 1));
  return res;
}

}  // namespace fvinf
