#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fvinf/potentials.hpp"

namespace testing_support {

inline constexpr std::uint64_t seed = 0x5eed2026ULL;

struct Gen {
  std::mt19937_64 rng{seed};
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  fvinf::ModelParams model() {
    fvinf::ModelParams p;
    p.M_p = uniform(0.5, 2.0);
    p.m = p.M_p * log_uniform(1e-3, 0.5);
    p.A = uniform(0.0, 2.0);
    p.rho_init = uniform(0.0, 1.0);
    p.phi0_tilde = uniform(0.0, 6.0);
    return p;
  }
};

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Direct long-double evaluation of the three closed forms.
inline long double v1_ref(long double phi, long double M_p, long double m, long double phi_star, long double rho) {
  return rho + M_p * M_p / 2.0L * (1.0L - std::cos(phi)) + m * m / 2.0L * (phi - phi_star) * (phi - phi_star);
}
inline long double v2_ref(long double phi, long double m, long double A) {
  return 0.5L * m * m * phi * phi / (1.0L + A * phi * phi * phi);
}
inline long double phi_star_ref(long double M_p, long double m) {
  return std::pow(3.0L / (16.0L * 3.14159265358979323846264338327950288L), 0.25L) * std::pow(M_p, 1.5L) /
         std::sqrt(m);
}

struct GridExtremum {
  double x;
  bool is_min;
};

// Local extrema of sampled values on a uniform grid.
inline std::vector<GridExtremum> grid_extrema(const std::function<double(double)>& f, double lo, double hi,
                                              double step) {
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) v[i] = f(lo + step * static_cast<double>(i));
  std::vector<GridExtremum> out;
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i] < v[i - 1] && v[i] <= v[i + 1]) out.push_back({lo + step * static_cast<double>(i), true});
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) out.push_back({lo + step * static_cast<double>(i), false});
  }
  return out;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fvinf_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
