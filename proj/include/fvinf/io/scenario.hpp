#pragma once

// Scenario: every parameter record of a run, loaded strictly from key = value
// text, validated as a whole and resolved (calibrated mass, phi*, a0, alpha).

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fvinf/dilaton.hpp"
#include "fvinf/dynamics.hpp"
#include "fvinf/errors.hpp"
#include "fvinf/io/config.hpp"
#include "fvinf/io/format.hpp"
#include "fvinf/nucleation.hpp"
#include "fvinf/potentials.hpp"
#include "fvinf/vacuum.hpp"

namespace fvinf::io {

struct IntegrationSettings {
  double t0 = 0.0;
  double t_end = 60.0;
  double phi_dot0 = 0.0;
  StepControl control{StepMode::fixed, 1e-3, {1e-9, 1e-9}, 100};
};

struct Toggles {
  /// H^2 = (8 pi / 3) G (phi_dot^2 / 2 + V) instead of the potential-only closure.
  bool kinetic_friedmann = false;
  /// Restoring force m^2 (phi - phi*) in every regime instead of dV/dphi.
  bool literal_force = false;
};

struct Scenario {
  std::string name = "scenario";
  ModelParams model;
  CosmoParams cosmo;
  NucleationParams nucleation;
  DilatonParams dilaton;
  IntegrationSettings integration;
  Toggles toggles;
  Interval vacuum_window = default_vacuum_window();
  /// When set, model.m is replaced by the smallest mass reproducing this gap.
  std::optional<double> target_gap;
  std::size_t calibration_points = 10000;

  /// Filled by load when target_gap is set.
  std::optional<CalibrationResult> calibration;
  /// Whether nucleation.e_coeff was left at its default.
  bool e_coeff_defaulted = true;

  DynamicsOptions dynamics_options() const {
    DynamicsOptions o;
    o.closure = toggles.kinetic_friedmann ? HubbleClosure::kinetic_inclusive : HubbleClosure::potential;
    o.force = toggles.literal_force ? ForceLaw::linear_restoring : ForceLaw::potential_gradient;
    return o;
  }
};

namespace detail {

using json = nlohmann::json;

struct KeySpec {
  std::string_view key;
  std::function<void(Scenario&, std::string_view, std::size_t line)> set;
  std::function<json(const Scenario&)> get;
};

inline double parse_real(std::string_view key, std::string_view v, std::size_t line) {
  auto x = parse_double(v);
  if (!x) throw ParseError(line, "key '" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
  return *x;
}

template <class Ref>
KeySpec real_key(std::string_view key, Ref ref) {
  return {key,
          [key, ref](Scenario& s, std::string_view v, std::size_t line) { ref(s) = parse_real(key, v, line); },
          [ref](const Scenario& s) { return json(ref(const_cast<Scenario&>(s))); }};
}

template <class Ref>
KeySpec optional_key(std::string_view key, Ref ref) {
  return {key,
          [key, ref](Scenario& s, std::string_view v, std::size_t line) { ref(s) = parse_real(key, v, line); },
          [ref](const Scenario& s) {
            const std::optional<double>& o = ref(const_cast<Scenario&>(s));
            return o ? json(*o) : json(nullptr);
          }};
}

template <class Ref>
KeySpec bool_key(std::string_view key, Ref ref) {
  return {key,
          [key, ref](Scenario& s, std::string_view v, std::size_t line) {
            if (v == "true") ref(s) = true;
            else if (v == "false") ref(s) = false;
            else throw ParseError(line, "key '" + std::string(key) + "': expected true or false, got '" + std::string(v) + "'");
          },
          [ref](const Scenario& s) { return json(ref(const_cast<Scenario&>(s))); }};
}

template <class Ref>
KeySpec count_key(std::string_view key, Ref ref) {
  return {key,
          [key, ref](Scenario& s, std::string_view v, std::size_t line) {
            const double x = parse_real(key, v, line);
            if (!(x >= 0) || x != std::floor(x) || x > 1e15)
              throw ParseError(line, "key '" + std::string(key) + "': expected a non-negative integer");
            ref(s) = static_cast<std::size_t>(x);
          },
          [ref](const Scenario& s) { return json(ref(const_cast<Scenario&>(s))); }};
}

#define FVINF_REF(expr) [](Scenario& s) -> auto& { return s.expr; }

inline const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> t;
    t.push_back({"name",
                 [](Scenario& s, std::string_view v, std::size_t) { s.name = std::string(v); },
                 [](const Scenario& s) { return json(s.name); }});
    t.push_back(real_key("model.M_p", FVINF_REF(model.M_p)));
    t.push_back(real_key("model.m", FVINF_REF(model.m)));
    t.push_back(real_key("model.A", FVINF_REF(model.A)));
    t.push_back(optional_key("model.phi_star", FVINF_REF(model.phi_star)));
    t.push_back(real_key("model.phi0_tilde", FVINF_REF(model.phi0_tilde)));
    t.push_back(real_key("model.G", FVINF_REF(model.G)));
    t.push_back(real_key("model.rho_init", FVINF_REF(model.rho_init)));
    t.push_back(real_key("model.t_p", FVINF_REF(model.t_p)));
    t.push_back(real_key("model.delta_t", FVINF_REF(model.delta_t)));
    t.push_back(optional_key("model.window_r2", FVINF_REF(model.window_r2)));
    t.push_back(real_key("cosmo.a_B", FVINF_REF(cosmo.a_B)));
    t.push_back(real_key("cosmo.H_B", FVINF_REF(cosmo.H_B)));
    t.push_back(real_key("cosmo.t_B", FVINF_REF(cosmo.t_B)));
    t.push_back(optional_key("cosmo.alpha", FVINF_REF(cosmo.alpha)));
    t.push_back(optional_key("cosmo.a0_tilde", FVINF_REF(cosmo.a0_tilde)));
    t.push_back(optional_key("nucleation.lambda0", FVINF_REF(nucleation.lambda0)));
    t.push_back(real_key("nucleation.E0", FVINF_REF(nucleation.E0)));
    t.push_back(real_key("nucleation.S_E", FVINF_REF(nucleation.S_E)));
    t.push_back(real_key("nucleation.M", FVINF_REF(nucleation.M)));
    t.push_back({"nucleation.e_coeff",
                 [](Scenario& s, std::string_view v, std::size_t line) {
                   s.nucleation.e_coeff = parse_real("nucleation.e_coeff", v, line);
                   s.e_coeff_defaulted = false;
                 },
                 [](const Scenario& s) { return s.e_coeff_defaulted ? json(nullptr) : json(s.nucleation.e_coeff); }});
    t.push_back(real_key("dilaton.l_p", FVINF_REF(dilaton.l_p)));
    t.push_back(real_key("dilaton.phi", FVINF_REF(dilaton.phi)));
    t.push_back(real_key("dilaton.t_p_SI", FVINF_REF(dilaton.t_p_SI)));
    t.push_back(real_key("integration.t0", FVINF_REF(integration.t0)));
    t.push_back(real_key("integration.t_end", FVINF_REF(integration.t_end)));
    t.push_back(real_key("integration.phi_dot0", FVINF_REF(integration.phi_dot0)));
    t.push_back({"integration.step_mode",
                 [](Scenario& s, std::string_view v, std::size_t line) {
                   if (v == "fixed") s.integration.control.mode = StepMode::fixed;
                   else if (v == "adaptive") s.integration.control.mode = StepMode::adaptive;
                   else throw ParseError(line, "key 'integration.step_mode': expected fixed or adaptive, got '" + std::string(v) + "'");
                 },
                 [](const Scenario& s) {
                   return json(s.integration.control.mode == StepMode::fixed ? "fixed" : "adaptive");
                 }});
    t.push_back(real_key("integration.step", FVINF_REF(integration.control.step)));
    t.push_back(real_key("integration.atol", FVINF_REF(integration.control.tol.atol)));
    t.push_back(real_key("integration.rtol", FVINF_REF(integration.control.tol.rtol)));
    t.push_back(count_key("integration.stride", FVINF_REF(integration.control.stride)));
    t.push_back(count_key("integration.max_steps", FVINF_REF(integration.control.max_steps)));
    t.push_back(bool_key("toggles.kinetic_friedmann", FVINF_REF(toggles.kinetic_friedmann)));
    t.push_back(bool_key("toggles.literal_force", FVINF_REF(toggles.literal_force)));
    t.push_back(real_key("vacuum.window_lo", FVINF_REF(vacuum_window.lo)));
    t.push_back(real_key("vacuum.window_hi", FVINF_REF(vacuum_window.hi)));
    t.push_back(optional_key("calibration.target_gap", FVINF_REF(target_gap)));
    t.push_back(count_key("calibration.points", FVINF_REF(calibration_points)));
    return t;
  }();
  return table;
}

#undef FVINF_REF

inline std::vector<std::string> scenario_violations(const Scenario& s) {
  std::vector<std::string> out;
  auto add = [&](std::string_view section, const std::vector<std::string>& v) {
    for (const auto& x : v) out.push_back(std::string(section) + ": " + x);
  };
  if (s.name.empty()) out.emplace_back("name non-empty");
  add("model", violations(s.model));
  add("cosmo", violations(s.cosmo));
  add("nucleation", violations(s.nucleation, s.model.M_p));
  add("dilaton", violations(s.dilaton));
  std::vector<std::string> integ;
  const auto& c = s.integration;
  if (!std::isfinite(c.t0)) integ.emplace_back("t0 finite");
  if (!(c.t_end > c.t0)) integ.emplace_back("t_end > t0");
  if (!std::isfinite(c.phi_dot0)) integ.emplace_back("phi_dot0 finite");
  if (!(c.control.step > 0)) integ.emplace_back("step > 0");
  if (!(c.control.tol.atol > 0)) integ.emplace_back("atol > 0");
  if (!(c.control.tol.rtol >= 0)) integ.emplace_back("rtol >= 0");
  if (c.control.stride == 0) integ.emplace_back("stride >= 1");
  if (c.control.max_steps == 0) integ.emplace_back("max_steps >= 1");
  add("integration", integ);
  if (!(s.vacuum_window.hi > s.vacuum_window.lo)) out.emplace_back("vacuum: window_lo < window_hi");
  if (s.target_gap && !(*s.target_gap > 0)) out.emplace_back("calibration: target_gap > 0");
  if (s.calibration_points < 2) out.emplace_back("calibration: points >= 2");
  return out;
}

}  // namespace detail

/// Builds a scenario from parsed entries: strict keys, whole-scenario
/// validation, then calibration and derived fields.
inline Scenario scenario_from_entries(const ConfigEntries& entries) {
  Scenario s;
  const auto& table = detail::key_table();
  for (const auto& [key, entry] : entries) {
    auto it = std::find_if(table.begin(), table.end(), [&](const detail::KeySpec& k) { return k.key == key; });
    if (it == table.end()) throw ParseError(entry.line, "unknown key '" + key + "'");
    it->set(s, entry.value, entry.line);
  }

  if (auto v = detail::scenario_violations(s); !v.empty()) throw ValidationError(std::move(v));

  if (s.target_gap) {
    CalibrationOptions opt;
    opt.points = s.calibration_points;
    opt.window = s.vacuum_window;
    auto cal = calibrate_mass(s.model, *s.target_gap, opt);
    if (cal.masses.empty())
      throw NumericError("calibration_empty", "no mass in [" + format_double(cal.m_lo) + ", " +
                                                  format_double(cal.m_hi) + "] reproduces gap " +
                                                  format_double(*s.target_gap));
    s.model.m = cal.masses.front();
    s.model.phi_star.reset();
    s.calibration = std::move(cal);
    if (auto v = violations(s.model); !v.empty()) throw ValidationError(std::move(v));
  }

  s.model.phi_star = resolved_phi_star(s.model);
  s.model.window_r2 = resolved_window_r2(s.model);
  s.cosmo = resolve(s.cosmo, s.model);
  return s;
}

inline Scenario parse_scenario(std::string_view text) { return scenario_from_entries(parse_config(text)); }

inline Scenario load_scenario(const std::string& path) { return scenario_from_entries(load_config(path)); }

/// Resolved scenario as key = value text; loading it reproduces the scenario.
inline std::string to_config_text(const Scenario& s) {
  std::string out;
  for (const auto& k : detail::key_table()) {
    const auto v = k.get(s);
    if (v.is_null()) continue;
    out += std::string(k.key) + " = ";
    if (v.is_number_float()) out += format_double(v.get<double>());
    else if (v.is_string()) out += v.get<std::string>();
    else out += v.dump();
    out += '\n';
  }
  return out;
}

/// Resolved scenario as nested JSON sections.
inline nlohmann::json to_json(const Scenario& s) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& k : detail::key_table()) {
    const std::string key(k.key);
    const auto dot = key.find('.');
    if (dot == std::string::npos) j[key] = k.get(s);
    else j[key.substr(0, dot)][key.substr(dot + 1)] = k.get(s);
  }
  return j;
}

}  // namespace fvinf::io
