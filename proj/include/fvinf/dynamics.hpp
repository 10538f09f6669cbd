#pragma once

// Homogeneous inflaton + scale factor evolution across the R1 -> R2 -> R3
// schedule, in cosmic time and in conformal time, together with the
// closed-form slow-roll, matching and Hubble-rate expressions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fvinf/errors.hpp"
#include "fvinf/ode.hpp"
#include "fvinf/potentials.hpp"

namespace fvinf {

struct FieldState {
  double t = 0.0;
  double phi = 0.0;
  double phi_dot = 0.0;
  double a = 1.0;
  double H = 0.0;
  Regime regime = Regime::R1;
};

inline std::vector<std::string> violations(const FieldState& s) {
  std::vector<std::string> v;
  if (!(std::isfinite(s.t) && std::isfinite(s.phi) && std::isfinite(s.phi_dot) && std::isfinite(s.a) &&
        std::isfinite(s.H)))
    v.emplace_back("state entries finite");
  if (!(s.a > 0)) v.emplace_back("a > 0");
  return v;
}

/// End-of-inflation anchors plus the derived onset scale factor and the
/// matching constant. The optional fields are filled by resolve().
struct CosmoParams {
  double a_B = 1.0;
  double H_B = 0.01;
  double t_B = 1.0;
  std::optional<double> alpha;
  std::optional<double> a0_tilde;
};

inline std::vector<std::string> violations(const CosmoParams& c) {
  std::vector<std::string> v;
  if (!(c.a_B > 0) || !std::isfinite(c.a_B)) v.emplace_back("a_B > 0");
  if (!(c.H_B > 0) || !std::isfinite(c.H_B)) v.emplace_back("H_B > 0");
  if (!std::isfinite(c.t_B)) v.emplace_back("t_B finite");
  if (c.alpha && !(*c.alpha > 0)) v.emplace_back("alpha > 0");
  if (c.a0_tilde && !(*c.a0_tilde > 0)) v.emplace_back("a0_tilde > 0");
  return v;
}

/// Scale factor at t_p, extrapolated back from the end of inflation.
inline double a0_tilde(const CosmoParams& c, double t_p) {
  return c.a_B * std::exp(c.H_B * (t_p - c.t_B));
}

inline double slow_roll_velocity(const ModelParams& p) {
  return -p.m / std::sqrt(12.0 * std::numbers::pi * p.G);
}

/// Linear slow-roll trajectory phi0_tilde - m t / sqrt(12 pi G).
inline double slow_roll_phi(double t, const ModelParams& p) {
  return p.phi0_tilde + slow_roll_velocity(p) * t;
}

/// alpha such that m / sqrt(12 pi G) = a0 / alpha.
inline double match_alpha(const ModelParams& p, double a0) {
  if (!(p.m > 0)) throw ValidationError({"m > 0"});
  return a0 * std::sqrt(12.0 * std::numbers::pi * p.G) / p.m;
}

/// Exponential-decay form of the early trajectory, linearized:
/// phi_i (1 - a0 t / alpha).
inline double linearized_matching_phi(double t, double phi_i, double a0, double alpha) {
  return phi_i * (1.0 - a0 * t / alpha);
}

/// Slope of the linearized exponential form (with phi_i = phi0_tilde) over
/// the slow-roll slope. Equals phi0_tilde when alpha comes from match_alpha:
/// the matching drops one factor of the initial field.
inline double matching_slope_ratio(const ModelParams& p, double a0, double alpha) {
  return (p.phi0_tilde * a0 / alpha) / (-slow_roll_velocity(p));
}

inline CosmoParams resolve(CosmoParams c, const ModelParams& p) {
  if (auto v = violations(c); !v.empty()) throw ValidationError(std::move(v));
  if (!c.a0_tilde) c.a0_tilde = a0_tilde(c, p.t_p);
  if (!c.alpha) c.alpha = match_alpha(p, *c.a0_tilde);
  return c;
}

/// Closed-form early Hubble rate in conformal time, term for term:
/// (1/3)(a0/alpha)^-1 + (a0/alpha)(m^2/3)(1 - (phi*/phi0) exp((a0/alpha) t_conf)).
inline double hubble_closed_form(const ModelParams& p, const CosmoParams& c, double t_conf) {
  std::vector<std::string> v;
  if (!c.alpha || !(*c.alpha > 0)) v.emplace_back("alpha > 0");
  if (!c.a0_tilde || !(*c.a0_tilde > 0)) v.emplace_back("a0_tilde > 0");
  if (p.phi0_tilde == 0.0) v.emplace_back("phi0_tilde != 0");
  if (!v.empty()) throw ValidationError(std::move(v));
  const double r = *c.a0_tilde / *c.alpha;
  const double ratio = resolved_phi_star(p) / p.phi0_tilde;
  return (1.0 / 3.0) / r + r * (p.m * p.m / 3.0) * (1.0 - ratio * std::exp(r * t_conf));
}

enum class StepMode { fixed, adaptive };
enum class HubbleClosure { potential, kinetic_inclusive };
/// potential_gradient takes the force from dV/dphi of the active regime;
/// linear_restoring uses m^2 (phi - phi*) in every regime.
enum class ForceLaw { potential_gradient, linear_restoring };

struct StepControl {
  StepMode mode = StepMode::fixed;
  /// Fixed step, or the initial trial step in adaptive mode.
  double step = 1e-3;
  ode::Tolerance tol{};
  /// Emit every stride-th accepted step (boundaries and the end always).
  std::size_t stride = 1;
  std::size_t max_steps = 50'000'000;
  double min_step = 1e-14;
};

struct DynamicsOptions {
  HubbleClosure closure = HubbleClosure::potential;
  ForceLaw force = ForceLaw::potential_gradient;
  /// Test hook: replaces the Friedmann closure by a constant H (0 = static space).
  std::optional<double> fixed_hubble;
  /// Test hook: pins the potential regime regardless of time.
  std::optional<Regime> forced_regime;
};

struct RegimeTransition {
  double t;
  Regime from, to;
  double H_before, H_after;
};

struct TimeSeries {
  std::vector<FieldState> states;
  std::vector<double> V;
  /// ln(a / a_start)
  std::vector<double> efolds;
  /// Integral of H dt, carried as its own state component.
  std::vector<double> efolds_integral;
  /// Conformal runs only.
  std::vector<double> conformal_time;
  /// -1 / (a H); conformal runs only.
  std::vector<double> tilde_t;
  /// Nucleation rate column, filled by with_rate().
  std::vector<double> epsilon;
  std::vector<RegimeTransition> transitions;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
};

inline constexpr double friedmann_coefficient = 8.0 * std::numbers::pi / 3.0;

/// H from the active closure; throws when the energy density is negative.
inline double hubble_rate(Regime regime, double phi, double phi_dot, const ModelParams& p,
                          const DynamicsOptions& opt) {
  if (opt.fixed_hubble) return *opt.fixed_hubble;
  double rho = eval_potential(regime, phi, p);
  if (opt.closure == HubbleClosure::kinetic_inclusive) rho += 0.5 * phi_dot * phi_dot;
  if (rho < 0.0)
    throw NumericError("negative_potential",
                       "negative energy density " + std::to_string(rho) + " under the Friedmann closure in " +
                           std::string(to_string(regime)));
  return std::sqrt(friedmann_coefficient * p.G * rho);
}

inline double restoring_force(Regime regime, double phi, const ModelParams& p, const DynamicsOptions& opt) {
  if (opt.force == ForceLaw::linear_restoring) return p.m * p.m * (phi - resolved_phi_star(p));
  return eval_dpotential(regime, phi, p);
}

inline FieldState initial_state(const ModelParams& p, const CosmoParams& resolved, double t0, double phi_dot0,
                                const DynamicsOptions& opt = {}) {
  FieldState s;
  s.t = t0;
  s.phi = p.phi0_tilde;
  s.phi_dot = phi_dot0;
  s.a = resolved.a0_tilde ? *resolved.a0_tilde : a0_tilde(resolved, p.t_p);
  s.regime = opt.forced_regime.value_or(regime_for(t0, p));
  s.H = hubble_rate(s.regime, s.phi, s.phi_dot, p, opt);
  return s;
}

namespace detail {

inline std::string at_time(double t) { return " at t = " + std::to_string(t); }

[[noreturn]] inline void rethrow_at(const NumericError& e, double t) {
  if (e.time()) throw;
  if (const auto* pole = dynamic_cast<const PoleError*>(&e)) throw PoleError(pole->phi(), t);
  throw NumericError(e.type(), e.what() + at_time(t), t);
}

inline void check_pole_crossing(Regime r, double phi0, double phi1, const ModelParams& p, double t) {
  if (r != Regime::R2 || p.A == 0.0) return;
  const double d0 = 1.0 + p.A * phi0 * phi0 * phi0;
  const double d1 = 1.0 + p.A * phi1 * phi1 * phi1;
  if ((d0 < 0.0) != (d1 < 0.0)) throw PoleError(-std::cbrt(1.0 / p.A), t);
}

template <std::size_t N>
bool all_finite(const ode::State<N>& y) {
  return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

inline void validate_control(const StepControl& c) {
  std::vector<std::string> v;
  if (!(c.step > 0) || !std::isfinite(c.step)) v.emplace_back("integration.step > 0");
  if (c.stride == 0) v.emplace_back("integration.stride >= 1");
  if (!(c.tol.atol > 0) || !(c.tol.rtol >= 0)) v.emplace_back("integration tolerances > 0");
  if (!v.empty()) throw ValidationError(std::move(v));
}

}  // namespace detail

/// Integrates phi'' + 3 H phi' + F(phi) = 0, a' = a H in cosmic time from
/// initial.t to t_end. Steps never straddle a regime boundary; each boundary
/// is emitted as a sample and logged as a transition.
inline TimeSeries integrate_cosmic(const ModelParams& p, const FieldState& initial, double t_end,
                                   const StepControl& control = {}, const DynamicsOptions& opt = {}) {
  validate(p);
  detail::validate_control(control);
  if (auto v = violations(initial); !v.empty()) throw ValidationError(std::move(v));
  if (!(t_end > initial.t)) throw ValidationError({"t_end > initial.t"});

  using Y = ode::State<4>;  // phi, phi_dot, a, N
  TimeSeries ts;
  const double a_start = initial.a;

  auto regime_at = [&](double t) { return opt.forced_regime.value_or(regime_for(t, p)); };

  auto emit = [&](double t, const Y& y, Regime r) {
    double V = eval_potential(r, y[0], p);
    double H = hubble_rate(r, y[0], y[1], p, opt);
    ts.states.push_back({t, y[0], y[1], y[2], H, r});
    ts.V.push_back(V);
    ts.efolds.push_back(std::log(y[2] / a_start));
    ts.efolds_integral.push_back(y[3]);
  };

  std::vector<double> stops;
  if (!opt.forced_regime)
    for (double b : regime_boundaries(p))
      if (b > initial.t && b < t_end) stops.push_back(b);
  stops.push_back(t_end);

  double t = initial.t;
  Y y{initial.phi, initial.phi_dot, initial.a, 0.0};
  try {
    emit(t, y, regime_at(t));
  } catch (const NumericError& e) {
    detail::rethrow_at(e, t);
  }

  double h = control.step;
  std::size_t steps = 0;
  for (double stop : stops) {
    // Regime of the open interval (t, stop].
    const Regime r = opt.forced_regime.value_or(regime_for(0.5 * (t + stop), p));
    auto rhs = [&](double, const Y& s) -> Y {
      const double H = hubble_rate(r, s[0], s[1], p, opt);
      return {s[1], -3.0 * H * s[1] - restoring_force(r, s[0], p, opt), s[2] * H, H};
    };

    const double segment_start = t;
    std::size_t k = 0;
    while (t < stop) {
      const double remaining = stop - t;
      double h_try = remaining <= h * (1.0 + 1e-9) ? remaining : h;
      Y next;
      try {
        if (control.mode == StepMode::fixed) {
          next = ode::rk4_step<4>(rhs, t, y, h_try);
          ++k;
        } else {
          for (;;) {
            const auto d = ode::step_doubling<4>(rhs, t, y, h_try, control.tol);
            if (d.error <= 1.0 && detail::all_finite(d.y)) {
              next = d.y;
              h = ode::next_step(h_try, d.error);
              break;
            }
            h_try = ode::next_step(h_try, std::isfinite(d.error) ? d.error : 1e6);
            if (h_try < control.min_step)
              throw NumericError("step_failure", "adaptive step fell below " + std::to_string(control.min_step));
          }
        }
        detail::check_pole_crossing(r, y[0], next[0], p, t);
      } catch (const NumericError& e) {
        detail::rethrow_at(e, t);
      }
      if (!detail::all_finite(next))
        throw NumericError("step_failure", "non-finite state" + detail::at_time(t), t);

      // Fixed steps land on segment_start + k h so rounding does not accumulate.
      const double t_next = control.mode == StepMode::fixed ? segment_start + static_cast<double>(k) * h : t + h_try;
      const bool reached = h_try >= remaining || stop - t_next <= 1e-9 * h;
      t = reached ? stop : t_next;
      y = next;
      if (++steps > control.max_steps)
        throw NumericError("step_failure", "step budget exhausted" + detail::at_time(t), t);

      try {
        if (reached) {
          emit(t, y, regime_at(t));
          const Regime after = regime_at(std::nextafter(t, std::numeric_limits<double>::infinity()));
          if (t < t_end && after != ts.states.back().regime)
            ts.transitions.push_back({t, ts.states.back().regime, after, ts.states.back().H,
                                      hubble_rate(after, y[0], y[1], p, opt)});
        } else if (steps % control.stride == 0) {
          emit(t, y, regime_at(t));
        }
      } catch (const NumericError& e) {
        detail::rethrow_at(e, t);
      }
    }
  }
  return ts;
}

struct ConformalSpan {
  double tau_start = 0.0;
  double tau_end = 1.0;
};

inline constexpr double singular_map_tol = 1e-12;

/// Integrates phi'' + 2 aH phi' + a^2 F(phi) = 0 with a' = a^2 H and t' = a in
/// conformal time. The regime follows the cosmic time carried in the state.
inline TimeSeries integrate_conformal(const ModelParams& p, const FieldState& initial, ConformalSpan span,
                                      const StepControl& control = {}, const DynamicsOptions& opt = {}) {
  validate(p);
  detail::validate_control(control);
  if (auto v = violations(initial); !v.empty()) throw ValidationError(std::move(v));
  if (!(span.tau_end > span.tau_start)) throw ValidationError({"tau_end > tau_start"});

  using Y = ode::State<5>;  // phi, dphi/dtau, a, t, N
  TimeSeries ts;
  const double a_start = initial.a;

  auto regime_at = [&](double t) { return opt.forced_regime.value_or(regime_for(t, p)); };

  auto conformal_hubble = [&](const Y& s, Regime r) {
    const double H = hubble_rate(r, s[0], s[1] / s[2], p, opt);
    const double aH = s[2] * H;
    if (std::abs(aH) < singular_map_tol)
      throw NumericError("singular_map", "|a H| below 1e-12; conformal map is singular");
    return H;
  };

  auto emit = [&](double tau, const Y& y) {
    const Regime r = regime_at(y[3]);
    const double H = conformal_hubble(y, r);
    ts.states.push_back({y[3], y[0], y[1] / y[2], y[2], H, r});
    ts.V.push_back(eval_potential(r, y[0], p));
    ts.efolds.push_back(std::log(y[2] / a_start));
    ts.efolds_integral.push_back(y[4]);
    ts.conformal_time.push_back(tau);
    ts.tilde_t.push_back(-1.0 / (y[2] * H));
  };

  auto rhs = [&](double, const Y& s) -> Y {
    const Regime r = regime_at(s[3]);
    const double H = conformal_hubble(s, r);
    const double a = s[2];
    return {s[1], -2.0 * a * H * s[1] - a * a * restoring_force(r, s[0], p, opt), a * a * H, a, a * H};
  };

  double tau = span.tau_start;
  Y y{initial.phi, initial.phi_dot * initial.a, initial.a, initial.t, 0.0};
  try {
    emit(tau, y);
  } catch (const NumericError& e) {
    detail::rethrow_at(e, y[3]);
  }

  double h = control.step;
  std::size_t steps = 0;
  while (tau < span.tau_end) {
    const bool last = (span.tau_end - tau) <= h * (1.0 + 1e-9) ||
                      (control.mode == StepMode::fixed &&
                       span.tau_end - (span.tau_start + static_cast<double>(steps + 1) * h) <= 1e-9 * h);
    double h_try = last ? span.tau_end - tau : h;
    Y next;
    const Regime r0 = regime_at(y[3]);
    try {
      if (control.mode == StepMode::fixed) {
        next = ode::rk4_step<5>(rhs, tau, y, h_try);
      } else {
        for (;;) {
          const auto d = ode::step_doubling<5>(rhs, tau, y, h_try, control.tol);
          if (d.error <= 1.0 && detail::all_finite(d.y)) {
            next = d.y;
            h = ode::next_step(h_try, d.error);
            break;
          }
          h_try = ode::next_step(h_try, std::isfinite(d.error) ? d.error : 1e6);
          if (h_try < control.min_step)
            throw NumericError("step_failure", "adaptive step fell below " + std::to_string(control.min_step));
        }
      }
      detail::check_pole_crossing(r0, y[0], next[0], p, y[3]);
    } catch (const NumericError& e) {
      detail::rethrow_at(e, y[3]);
    }
    if (!detail::all_finite(next))
      throw NumericError("step_failure", "non-finite state" + detail::at_time(y[3]), y[3]);

    tau = last ? span.tau_end
               : control.mode == StepMode::fixed ? span.tau_start + static_cast<double>(steps + 1) * h
                                                 : tau + h_try;
    y = next;
    if (++steps > control.max_steps)
      throw NumericError("step_failure", "step budget exhausted" + detail::at_time(y[3]), y[3]);

    try {
      const Regime r1 = regime_at(y[3]);
      if (r1 != r0)
        ts.transitions.push_back({y[3], r0, r1, hubble_rate(r0, y[0], y[1] / y[2], p, opt),
                                  hubble_rate(r1, y[0], y[1] / y[2], p, opt)});
      if (last || steps % control.stride == 0) emit(tau, y);
    } catch (const NumericError& e) {
      detail::rethrow_at(e, y[3]);
    }
  }
  return ts;
}

/// Cubic Hermite interpolation of phi(t) from the phi and phi_dot columns.
inline double interpolate_phi(const TimeSeries& ts, double t) {
  const auto& s = ts.states;
  if (s.size() < 2 || t < s.front().t || t > s.back().t)
    throw ValidationError({"interpolation time inside the series"});
  auto it = std::upper_bound(s.begin(), s.end(), t, [](double x, const FieldState& st) { return x < st.t; });
  if (it == s.end()) return s.back().phi;
  const FieldState& b = *it;
  const FieldState& a = *(it - 1);
  const double h = b.t - a.t;
  if (h <= 0.0) return a.phi;
  const double u = (t - a.t) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
  return h00 * a.phi + h10 * h * a.phi_dot + h01 * b.phi + h11 * h * b.phi_dot;
}

}  // namespace fvinf
