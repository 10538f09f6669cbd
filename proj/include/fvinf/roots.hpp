#pragma once

// Bracketing root search: a uniform sign-change scan followed by bisection.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace fvinf {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct Bracket {
  double lo, hi;
  double f_lo, f_hi;
};

/// Brackets of sign changes of f over n uniform cells. A grid point where f
/// is exactly zero yields a degenerate bracket [x, x].
template <class F>
std::vector<Bracket> scan_sign_changes(F&& f, Interval range, std::size_t cells) {
  std::vector<Bracket> out;
  if (cells == 0 || !(range.hi > range.lo)) return out;
  const double h = range.width() / static_cast<double>(cells);
  double x_prev = range.lo;
  double f_prev = f(x_prev);
  for (std::size_t i = 1; i <= cells; ++i) {
    const double x = (i == cells) ? range.hi : range.lo + h * static_cast<double>(i);
    const double fx = f(x);
    if (f_prev == 0.0) {
      out.push_back({x_prev, x_prev, 0.0, 0.0});
    } else if ((f_prev < 0.0 && fx > 0.0) || (f_prev > 0.0 && fx < 0.0)) {
      out.push_back({x_prev, x, f_prev, fx});
    }
    x_prev = x;
    f_prev = fx;
  }
  if (f_prev == 0.0) out.push_back({x_prev, x_prev, 0.0, 0.0});
  return out;
}

/// Bisects a sign-changing bracket until it cannot shrink further in double
/// precision, or |f| drops below ftol. Returns the endpoint with smaller |f|.
template <class F>
double bisect(F&& f, Bracket b, double ftol = 0.0, int max_iter = 200) {
  if (b.lo == b.hi) return b.lo;
  double lo = b.lo, hi = b.hi, f_lo = b.f_lo, f_hi = b.f_hi;
  for (int i = 0; i < max_iter; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0 || std::abs(fm) < ftol) return mid;
    if ((fm < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
      f_hi = fm;
    }
  }
  return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

}  // namespace fvinf
