#pragma once

// CLI subcommands as functions returning process exit codes
// (0 success, 1 validation, 2 numeric failure, 3 IO).

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>

#include "fvinf/errors.hpp"
#include "fvinf/io/checksum.hpp"
#include "fvinf/io/config.hpp"
#include "fvinf/io/run.hpp"
#include "fvinf/io/scenario.hpp"
#include "fvinf/io/sweep.hpp"
#include "fvinf/vacuum.hpp"

namespace fvinf::io {

namespace detail {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return exit_code(ErrorKind::io);
  }
}

}  // namespace detail

inline int cmd_vacuum(const std::string& config, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto s = load_scenario(config);
    out << to_json(vacuum_report(s.model, s.vacuum_window)).dump(2) << '\n';
    return 0;
  });
}

/// Lists every mass reproducing target_gap; an empty list is a valid
/// (certified) answer and carries the scanned range.
inline int cmd_calibrate(const std::string& config, double target_gap, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    auto entries = load_config(config);
    entries.erase("calibration.target_gap");
    const auto s = scenario_from_entries(entries);
    CalibrationOptions opt;
    opt.points = s.calibration_points;
    opt.window = s.vacuum_window;
    const auto cal = calibrate_mass(s.model, target_gap, opt);

    json j = to_json(cal);
    json detail = json::array();
    for (double m : cal.masses) {
      ModelParams p = s.model;
      p.m = m;
      p.phi_star.reset();
      const auto r = vacuum_report(p, s.vacuum_window);
      detail.push_back({{"m", m}, {"phi_star", phi_star(p)}, {"phi_T", r.phi_T}, {"phi_F", r.phi_F}, {"gap", r.gap}});
    }
    j["solutions"] = detail;
    j["count"] = cal.masses.size();
    out << j.dump(2) << '\n';
    return 0;
  });
}

inline int cmd_simulate(const std::string& config, const std::filesystem::path& out_dir, std::ostream& out,
                        std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto s = load_scenario(config);
    const auto r = run(s, out_dir);
    if (r.ok()) {
      const auto& sum = r.manifest["summary"];
      out << "run '" << s.name << "' ok: " << sum["samples"].get<std::size_t>() << " samples, gap "
          << format_double(sum["gap"].get<double>()) << ", efolds " << format_double(sum["efolds"].get<double>())
          << ", final H " << format_double(sum["final_H"].get<double>()) << '\n';
    } else {
      err << "run '" << s.name << "' failed: " << r.manifest["error"]["message"].get<std::string>() << '\n';
    }
    return r.exit_code;
  });
}

inline int cmd_sweep(const std::string& config, const std::string& grid, const std::filesystem::path& out_dir,
                     std::ostream& out, std::ostream& err, unsigned threads = 0) {
  return detail::guarded(err, [&] {
    const auto entries = load_config(config);
    const auto axes = parse_grid(grid);
    const auto res = sweep(entries, axes, out_dir, threads);
    out << res.rows.size() << " points, " << res.failures << " failed; summary at "
        << (out_dir / "summary.csv").string() << '\n';
    for (const auto& row : res.rows)
      if (!row.ok) err << "point " << row.index << " (" << row.name << ") failed: " << row.error << '\n';
    return res.exit_code();
  });
}

/// Verifies a run directory against its manifest and prints a summary.
inline int cmd_report(const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto manifest = json::parse(read_text_file((run_dir / "manifest.json").string()));
    std::size_t bad = 0;
    for (const auto& o : manifest.at("outputs")) {
      const auto file = o.at("file").get<std::string>();
      std::string status;
      try {
        status = sha256_hex(read_text_file((run_dir / file).string())) == o.at("sha256").get<std::string>()
                     ? "ok"
                     : "CHECKSUM MISMATCH";
      } catch (const IoError&) {
        status = "MISSING";
      }
      if (status != "ok") ++bad;
      out << "  " << file << ": " << status << '\n';
    }
    const auto status = manifest.value("status", std::string("unknown"));
    out << "status: " << status << '\n';
    if (manifest.contains("scenario")) out << "scenario: " << manifest["scenario"].value("name", std::string()) << '\n';
    if (manifest.contains("summary")) {
      for (const auto& [k, v] : manifest["summary"].items())
        out << "  " << k << " = " << (v.is_number_float() ? format_double(v.get<double>()) : v.dump()) << '\n';
    }
    if (manifest.contains("resolved") && manifest["resolved"].contains("lambda0"))
      out << "  lambda0 = " << format_double(manifest["resolved"]["lambda0"].get<double>()) << '\n';
    if (manifest.contains("error")) out << "error: " << manifest["error"].value("message", std::string()) << '\n';
    if (bad) {
      err << bad << " output file(s) failed verification\n";
      return exit_code(ErrorKind::io);
    }
    if (status != "ok") return exit_code(ErrorKind::numeric);
    return 0;
  });
}

}  // namespace fvinf::io
