#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvinf {

/// Broad failure class; drives CLI exit codes (1 validation, 2 numeric, 3 IO).
enum class ErrorKind { validation = 1, numeric = 2, io = 3 };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string type, const std::string& what)
      : std::runtime_error(what), kind_(kind), type_(std::move(type)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Short machine-readable tag, e.g. "pole", "no_extremum".
  const std::string& type() const noexcept { return type_; }

private:
  ErrorKind kind_;
  std::string type_;
};

inline int exit_code(ErrorKind kind) { return static_cast<int>(kind); }

/// Every violated invariant is listed, not just the first.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(ErrorKind::validation, "validation", join(violations)),
        violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid parameters:";
    for (const auto& s : v) out += " [" + s + "]";
    return out;
  }
  std::vector<std::string> violations_;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::validation, "parse",
              line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class NumericError : public Error {
public:
  NumericError(std::string type, const std::string& what, std::optional<double> t = {})
      : Error(ErrorKind::numeric, std::move(type), what), time_(t) {}

  /// Simulation time at which the failure happened, when known.
  std::optional<double> time() const noexcept { return time_; }

private:
  std::optional<double> time_;
};

class PoleError : public NumericError {
public:
  explicit PoleError(double phi, std::optional<double> t = {})
      : NumericError("pole",
                     "V2 pole: 1 + A*phi^3 vanishes near phi = " + std::to_string(phi) +
                         (t ? " at t = " + std::to_string(*t) : std::string{}),
                     t),
        phi_(phi) {}
  double phi() const noexcept { return phi_; }

private:
  double phi_;
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, "io", what) {}
};

}  // namespace fvinf
