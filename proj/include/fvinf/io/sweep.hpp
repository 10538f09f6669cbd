#pragma once

// Cartesian parameter sweeps. Grid spec: axes separated by ';', each either
// "key=v1,v2,..." or "key=lo:hi:n" (n evenly spaced values, ends included).

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fvinf/errors.hpp"
#include "fvinf/io/config.hpp"
#include "fvinf/io/format.hpp"
#include "fvinf/io/run.hpp"
#include "fvinf/io/scenario.hpp"

namespace fvinf::io {

struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

inline std::vector<GridAxis> parse_grid(std::string_view spec) {
  std::vector<GridAxis> axes;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    auto end = spec.find(';', pos);
    if (end == std::string_view::npos) end = spec.size();
    const auto item = detail::trim(spec.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) continue;

    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError(0, "grid axis '" + std::string(item) + "' lacks '='");
    GridAxis axis{std::string(detail::trim(item.substr(0, eq))), {}};
    const auto rhs = detail::trim(item.substr(eq + 1));
    if (axis.key.empty() || rhs.empty()) throw ParseError(0, "grid axis '" + std::string(item) + "' is incomplete");

    if (rhs.find(':') != std::string_view::npos) {
      const auto c1 = rhs.find(':');
      const auto c2 = rhs.find(':', c1 + 1);
      if (c2 == std::string_view::npos) throw ParseError(0, "range '" + std::string(rhs) + "' must be lo:hi:n");
      const auto lo = parse_double(rhs.substr(0, c1));
      const auto hi = parse_double(rhs.substr(c1 + 1, c2 - c1 - 1));
      const auto n = parse_double(rhs.substr(c2 + 1));
      if (!lo || !hi || !n || *n < 1 || *n != std::floor(*n))
        throw ParseError(0, "range '" + std::string(rhs) + "' must be lo:hi:n with integer n >= 1");
      const auto count = static_cast<std::size_t>(*n);
      for (std::size_t i = 0; i < count; ++i) {
        const double x = count == 1 ? *lo : *lo + (*hi - *lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        axis.values.push_back(format_double(x));
      }
    } else {
      std::size_t p = 0;
      while (p <= rhs.size()) {
        auto c = rhs.find(',', p);
        if (c == std::string_view::npos) c = rhs.size();
        const auto v = detail::trim(rhs.substr(p, c - p));
        if (v.empty()) throw ParseError(0, "empty value in grid axis '" + axis.key + "'");
        axis.values.emplace_back(v);
        p = c + 1;
      }
    }
    axes.push_back(std::move(axis));
  }
  if (axes.empty()) throw ParseError(0, "grid is empty");
  return axes;
}

struct SweepRow {
  std::size_t index = 0;
  std::string name;
  std::vector<std::string> values;
  bool ok = false;
  int exit_code = 0;
  json summary;
  std::string error;
};

struct SweepResult {
  std::vector<GridAxis> axes;
  std::vector<SweepRow> rows;
  std::size_t failures = 0;
  int exit_code() const { return failures ? 2 : 0; }
};

inline std::string point_dir_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "point_%04zu", i);
  return buf;
}

/// Runs every grid point (concurrently) under out_dir/point_NNNN and writes
/// out_dir/summary.csv in grid order.
inline SweepResult sweep(const ConfigEntries& base, const std::vector<GridAxis>& axes,
                         const std::filesystem::path& out_dir, unsigned threads = 0) {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  if (total == 0) throw ParseError(0, "grid is empty");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  const std::string base_name = base.count("name") ? base.at("name").value : "scenario";
  SweepResult res{axes, std::vector<SweepRow>(total), 0};

  auto run_point = [&](std::size_t idx) {
    SweepRow& row = res.rows[idx];
    row.index = idx;
    ConfigEntries entries = base;
    std::size_t rem = idx;
    row.values.resize(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      const auto& axis = axes[k];
      row.values[k] = axis.values[rem % axis.values.size()];
      rem /= axis.values.size();
      entries[axis.key] = {row.values[k], 0};
    }
    row.name = base_name + "_" + point_dir_name(idx).substr(6);
    entries["name"] = {row.name, 0};
    const auto dir = out_dir / point_dir_name(idx);
    try {
      const Scenario s = scenario_from_entries(entries);
      auto r = run(s, dir);
      row.exit_code = r.exit_code;
      row.ok = r.ok();
      if (r.ok()) row.summary = r.manifest["summary"];
      else row.error = r.manifest["error"]["message"].get<std::string>();
    } catch (const Error& e) {
      row.ok = false;
      row.exit_code = exit_code(e.kind());
      row.error = e.what();
      std::filesystem::create_directories(dir, ec);
      json m{{"tool", {{"name", tool_name}, {"version", tool_version}}},
             {"status", "failed"},
             {"error", to_json(e)},
             {"outputs", json::array()}};
      try {
        detail::write_file(dir / "manifest.json", m.dump(2) + "\n");
      } catch (const IoError&) {
      }
    }
  };

  unsigned n_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, total));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < total; i = next++) run_point(i);
      });
  }

  std::string csv = "index,name";
  for (const auto& a : axes) csv += "," + a.key;
  csv += ",status,gap,efolds,final_H,epsilon_drift,error\n";
  for (const auto& row : res.rows) {
    if (!row.ok) ++res.failures;
    csv += std::to_string(row.index) + "," + row.name;
    for (const auto& v : row.values) csv += "," + v;
    csv += row.ok ? ",ok" : ",failed";
    for (const char* k : {"gap", "efolds", "final_H", "epsilon_drift"})
      csv += "," + (row.ok ? format_double(row.summary.at(k).get<double>()) : std::string{});
    std::string err = row.error;
    for (char& c : err)
      if (c == ',' || c == '\n') c = ';';
    csv += "," + err + "\n";
  }
  detail::write_file(out_dir / "summary.csv", csv);
  return res;
}

}  // namespace fvinf::io
