#pragma once

// Flat key = value configuration text. Keys carry dotted section prefixes
// (model.m = 0.01); '#' starts a comment; blank lines are ignored.

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "fvinf/errors.hpp"

namespace fvinf::io {

struct ConfigEntry {
  std::string value;
  /// Source line, 0 for entries set programmatically.
  std::size_t line = 0;
};

using ConfigEntries = std::map<std::string, ConfigEntry>;

namespace detail {
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}
}  // namespace detail

inline ConfigEntries parse_config(std::string_view text) {
  ConfigEntries out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value', got '" + std::string(line) + "'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    if (value.empty()) throw ParseError(line_no, "missing value for key '" + std::string(key) + "'");
    for (char c : key)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'))
        throw ParseError(line_no, "malformed key '" + std::string(key) + "'");
    if (key.front() == '.' || key.back() == '.' || key.find("..") != std::string_view::npos)
      throw ParseError(line_no, "malformed key '" + std::string(key) + "'");
    auto [it, inserted] = out.emplace(std::string(key), ConfigEntry{std::string(value), line_no});
    if (!inserted)
      throw ParseError(line_no, "duplicate key '" + std::string(key) + "' (first set on line " +
                                    std::to_string(it->second.line) + ")");
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ConfigEntries load_config(const std::string& path) { return parse_config(read_text_file(path)); }

}  // namespace fvinf::io
