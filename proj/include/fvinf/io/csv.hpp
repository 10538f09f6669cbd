#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fvinf/dynamics.hpp"
#include "fvinf/errors.hpp"
#include "fvinf/io/format.hpp"
#include "fvinf/topology.hpp"

namespace fvinf::io {

inline constexpr std::string_view series_header = "t,phi,phi_dot,a,H,V,epsilon,efolds,regime";

inline void write_series_csv(std::ostream& out, const TimeSeries& ts) {
  out << series_header << '\n';
  const bool has_eps = ts.epsilon.size() == ts.size();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& s = ts.states[i];
    out << format_double(s.t) << ',' << format_double(s.phi) << ',' << format_double(s.phi_dot) << ','
        << format_double(s.a) << ',' << format_double(s.H) << ',' << format_double(ts.V[i]) << ','
        << (has_eps ? format_double(ts.epsilon[i]) : std::string{}) << ',' << format_double(ts.efolds[i]) << ','
        << to_string(s.regime) << '\n';
  }
}

inline void write_lattice_csv(std::ostream& out, const LatticeField& f) {
  out << "x,phi\n";
  for (std::size_t j = 0; j < f.size(); ++j) out << format_double(f.x(j)) << ',' << format_double(f.values[j]) << '\n';
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw IoError("missing CSV column '" + std::string(name) + "'");
  }
};

/// Plain comma-separated table without quoting.
inline CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  auto split = [](std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (first) {
      t.header = split(line);
      first = false;
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

}  // namespace fvinf::io
