#pragma once

// Classical 4th-order Runge-Kutta on fixed-size states, with step-doubling
// error control (one step of h against two of h/2).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace fvinf::ode {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, const State<N>& k) {
  State<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
  return out;
}

/// One RK4 step; the rhs has the signature State<N>(double s, const State<N>&).
template <std::size_t N, class Rhs>
State<N> rk4_step(Rhs&& f, double s, const State<N>& y, double h) {
  const State<N> k1 = f(s, y);
  const State<N> k2 = f(s + 0.5 * h, axpy(y, 0.5 * h, k1));
  const State<N> k3 = f(s + 0.5 * h, axpy(y, 0.5 * h, k2));
  const State<N> k4 = f(s + h, axpy(y, h, k3));
  State<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

struct Tolerance {
  double atol = 1e-9;
  double rtol = 1e-9;
};

template <std::size_t N>
struct DoubledStep {
  State<N> y;
  /// Scaled error estimate; the step is acceptable when <= 1.
  double error;
};

/// Full step vs two half steps. The returned state is the Richardson
/// extrapolation of the half-step result.
template <std::size_t N, class Rhs>
DoubledStep<N> step_doubling(Rhs&& f, double s, const State<N>& y, double h, Tolerance tol) {
  const State<N> big = rk4_step<N>(f, s, y, h);
  const State<N> half = rk4_step<N>(f, s, y, 0.5 * h);
  const State<N> small = rk4_step<N>(f, s + 0.5 * h, half, 0.5 * h);
  DoubledStep<N> out{};
  double err = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double delta = small[i] - big[i];
    const double scale = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(small[i]));
    err = std::max(err, std::abs(delta) / 15.0 / scale);
    out.y[i] = small[i] + delta / 15.0;
  }
  out.error = err;
  return out;
}

/// Next step size for a 4th-order local error estimate.
inline double next_step(double h, double error) {
  constexpr double safety = 0.9, grow = 5.0, shrink = 0.2;
  if (error <= 0.0) return h * grow;
  return h * std::clamp(safety * std::pow(error, -0.2), shrink, grow);
}

}  // namespace fvinf::ode
