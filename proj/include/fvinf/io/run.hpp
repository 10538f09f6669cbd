#pragma once

// One end-to-end run: vacuum analysis, trajectory, nucleation rate, dilaton
// comparison, written as vacuum.json, series.csv, plots and manifest.json.

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "fvinf/dilaton.hpp"
#include "fvinf/dynamics.hpp"
#include "fvinf/errors.hpp"
#include "fvinf/io/checksum.hpp"
#include "fvinf/io/csv.hpp"
#include "fvinf/io/scenario.hpp"
#include "fvinf/io/svg.hpp"
#include "fvinf/nucleation.hpp"
#include "fvinf/vacuum.hpp"

#ifndef FVINF_VERSION
#define FVINF_VERSION "0.1.0"
#endif

namespace fvinf::io {

using nlohmann::json;

inline constexpr std::string_view tool_name = "fvinf";
inline constexpr std::string_view tool_version = FVINF_VERSION;

inline json to_json(const VacuumReport& r) {
  json extrema = json::array();
  for (const auto& e : r.extrema) extrema.push_back({{"phi", e.phi}, {"V", e.V}, {"kind", to_string(e.kind)}});
  return {{"phi_F", r.phi_F},
          {"phi_T", r.phi_T},
          {"V_F", r.V_F},
          {"V_T", r.V_T},
          {"gap", r.gap},
          {"bracket_A", r.bracket_A},
          {"bracket_B", r.bracket_B},
          {"bracket_residual", r.bracket_residual},
          {"wall_scale", r.wall_scale},
          {"wall_scale_convention", wall_scale_convention},
          {"window", {r.window.lo, r.window.hi}},
          {"extrema", extrema}};
}

inline json to_json(const CalibrationResult& c) {
  return {{"target_gap", c.target_gap},
          {"scan", {{"m_lo", c.m_lo}, {"m_hi", c.m_hi}, {"points", c.points}}},
          {"masses", c.masses},
          {"gaps", c.gaps}};
}

inline json to_json(const Error& e) {
  json j{{"kind", e.kind() == ErrorKind::validation ? "validation" : e.kind() == ErrorKind::numeric ? "numeric" : "io"},
         {"type", e.type()},
         {"message", e.what()}};
  if (const auto* n = dynamic_cast<const NumericError*>(&e); n && n->time()) j["t"] = *n->time();
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) j["violations"] = v->violations();
  return j;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline constexpr std::size_t landscape_points = 401;

inline json landscape(const ModelParams& p, Interval w) {
  json phi = json::array(), V = json::array();
  for (std::size_t i = 0; i < landscape_points; ++i) {
    const double x = w.lo + w.width() * static_cast<double>(i) / static_cast<double>(landscape_points - 1);
    phi.push_back(x);
    V.push_back(eval_potential(Regime::R1, x, p));
  }
  return {{"phi", phi}, {"V", V}};
}

inline std::string potential_plot(const json& vac) {
  Panel p;
  p.title = "V1 landscape";
  p.x_label = "phi";
  p.y_label = "V1(phi)";
  p.x = vac.at("landscape").at("phi").get<std::vector<double>>();
  p.y = vac.at("landscape").at("V").get<std::vector<double>>();
  p.markers.push_back({vac.at("phi_T").get<double>(), vac.at("V_T").get<double>(), "true vacuum"});
  p.markers.push_back({vac.at("phi_F").get<double>(), vac.at("V_F").get<double>(), "false vacuum"});
  return render_svg({p});
}

inline std::string series_plot(const TimeSeries& ts) {
  std::vector<double> t, phi, H, a;
  for (const auto& s : ts.states) {
    t.push_back(s.t);
    phi.push_back(s.phi);
    H.push_back(s.H);
    a.push_back(s.a);
  }
  std::vector<Panel> panels{{"inflaton", "t", "phi", t, phi, false, {}},
                            {"Hubble rate", "t", "H", t, H, false, {}},
                            {"scale factor", "t", "a", t, a, true, {}},
                            {"nucleation rate", "t", "epsilon", t, ts.epsilon, true, {}}};
  return render_svg(panels, 2);
}

}  // namespace detail

struct RunResult {
  json manifest;
  int exit_code = 0;
  bool ok() const { return exit_code == 0; }
};

/// Manifest skeleton shared by successful and failed runs.
inline json manifest_header(const Scenario& s) {
  json m;
  m["tool"] = {{"name", tool_name}, {"version", tool_version}};
  m["scenario"] = to_json(s);
  m["choices"] = {
      {"e_coeff", s.nucleation.e_coeff},
      {"e_coeff_source", s.e_coeff_defaulted ? "default: Euler's number" : "configured"},
      {"force_law", s.toggles.literal_force ? "linear_restoring m^2 (phi - phi*)" : "potential_gradient dV/dphi"},
      {"hubble_closure", s.toggles.kinetic_friedmann ? "kinetic_inclusive" : "potential_only"},
      {"wall_scale_convention", wall_scale_convention},
      {"frw_size_cm", "quoted benchmark, not computed"}};
  json resolved{{"phi_star", *s.model.phi_star},
                {"window_r2", *s.model.window_r2},
                {"a0_tilde", *s.cosmo.a0_tilde},
                {"alpha", *s.cosmo.alpha},
                {"calibrated_m", nullptr}};
  if (s.calibration) resolved["calibrated_m"] = {{"m", s.model.m}, {"calibration", to_json(*s.calibration)}};
  m["resolved"] = resolved;
  return m;
}

inline void write_manifest(const std::filesystem::path& dir, json& manifest,
                           const std::map<std::string, std::string>& outputs) {
  json inv = json::array();
  for (const auto& [file, sha] : outputs) inv.push_back({{"file", file}, {"sha256", sha}});
  manifest["outputs"] = inv;
  detail::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

inline RunResult run(const Scenario& s, const std::filesystem::path& out_dir) {
  RunResult result;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  json manifest = manifest_header(s);
  std::map<std::string, std::string> outputs;
  auto emit = [&](const std::string& name, const std::string& content) {
    detail::write_file(out_dir / name, content);
    outputs[name] = sha256_hex(content);
  };

  try {
    emit("scenario.cfg", to_config_text(s));

    const auto vac = vacuum_report(s.model, s.vacuum_window);
    json vac_json = to_json(vac);
    vac_json["landscape"] = detail::landscape(s.model, s.vacuum_window);
    emit("vacuum.json", vac_json.dump(2) + "\n");
    emit("potential.svg", detail::potential_plot(vac_json));

    const auto opts = s.dynamics_options();
    const auto init = initial_state(s.model, s.cosmo, s.integration.t0, s.integration.phi_dot0, opts);
    auto ts = integrate_cosmic(s.model, init, s.integration.t_end, s.integration.control, opts);
    const auto rate = rate_series(ts, s.nucleation, s.model.t_p);
    ts = with_rate(std::move(ts), rate);

    std::ostringstream csv;
    write_series_csv(csv, ts);
    emit("series.csv", csv.str());
    emit("series.svg", detail::series_plot(ts));

    json resolved = manifest["resolved"];
    resolved["lambda0"] = rate.lambda0;
    resolved["lambda0_auto_calibrated"] = rate.auto_calibrated;
    resolved["lambda0_anchor_t"] = rate.anchor ? json(ts.states[*rate.anchor].t) : json(nullptr);
    manifest["resolved"] = resolved;

    double friedmann_residual = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      double rho = ts.V[i];
      if (s.toggles.kinetic_friedmann) rho += 0.5 * ts.states[i].phi_dot * ts.states[i].phi_dot;
      const double H = ts.states[i].H;
      friedmann_residual = std::max(friedmann_residual, std::abs(H * H - friedmann_coefficient * s.model.G * rho));
    }

    json transitions = json::array();
    for (const auto& tr : ts.transitions)
      transitions.push_back({{"t", tr.t},
                             {"from", to_string(tr.from)},
                             {"to", to_string(tr.to)},
                             {"H_before", tr.H_before},
                             {"H_after", tr.H_after}});

    const auto bound = check_rate_bound(ts, s.model.t_p);
    const double H_anchor = rate.anchor ? ts.states[*rate.anchor].H : ts.states.front().H;
    const auto frw = frw_size_report(s.dilaton.t_p_SI);
    const double lambda_s = string_length(s.dilaton);

    manifest["diagnostics"] = {
        {"regime_transitions", transitions},
        {"friedmann_max_residual", friedmann_residual},
        {"rate_bound", {{"holds", bound.holds}, {"H4_anchor", bound.H4_anchor}, {"max_H4_after", bound.max_H4_after},
                        {"violations", bound.violations}}},
        {"garriga_density_at_anchor", garriga_density(s.nucleation, H_anchor)},
        {"matching_slope_ratio", matching_slope_ratio(s.model, *s.cosmo.a0_tilde, *s.cosmo.alpha)},
        {"matching_note", "linearized exponential matching drops a factor of phi0_tilde; ratio shown"},
        {"hubble_closed_form_at_t_conf_0", hubble_closed_form(s.model, s.cosmo, 0.0)},
        {"hubble_closed_form_note", "evaluated term for term; first term is dimensionally unlike the second"},
        {"dilaton",
         {{"phi", s.dilaton.phi},
          {"coupling", coupling_from_phi(s.dilaton.phi)},
          {"weak_coupling", weak_coupling(s.dilaton.phi)},
          {"string_length", lambda_s},
          {"string_length_cm", lambda_s / s.dilaton.l_p * frw.l_p_cm},
          {"frw", {{"t_p_s", frw.t_p_s}, {"l_p_cm", frw.l_p_cm}, {"frw_size_cm", frw.frw_size_cm}, {"ratio", frw.ratio}}}}}};

    const auto& last = ts.states.back();
    const double eps_anchor = ts.epsilon[rate.anchor.value_or(0)];
    manifest["summary"] = {{"samples", ts.size()},
                           {"gap", vac.gap},
                           {"efolds", ts.efolds.back()},
                           {"final_t", last.t},
                           {"final_phi", last.phi},
                           {"final_H", last.H},
                           {"epsilon_anchor", eps_anchor},
                           {"epsilon_final", ts.epsilon.back()},
                           {"epsilon_drift", ts.epsilon.back() - eps_anchor}};
    manifest["status"] = "ok";
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    manifest["status"] = "failed";
    manifest["error"] = to_json(e);
    result.exit_code = exit_code(e.kind());
  }
  write_manifest(out_dir, manifest, outputs);
  result.manifest = std::move(manifest);
  return result;
}

}  // namespace fvinf::io
