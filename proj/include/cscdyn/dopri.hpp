#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with step-size control.
// Used for the mean-field ODE and for the slow-manifold graph ODE.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include "cscdyn/errors.hpp"

namespace cscdyn::numerics {

template <std::size_t N>
using Vec = std::array<double, N>;

struct AdaptiveOptions {
  double atol = 1e-10;
  double rtol = 1e-8;
  double initial_step = 0.0;  ///< 0 selects an automatic first step
  double max_step = std::numeric_limits<double>::infinity();
  double min_step = 1e-12;
  std::size_t max_steps = 50'000'000;
};

namespace detail {

template <std::size_t N>
inline bool all_finite(const Vec<N>& y) {
  return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

template <std::size_t N>
inline double scaled_rms(const Vec<N>& err, const Vec<N>& y0, const Vec<N>& y1, const AdaptiveOptions& opt) {
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(N));
}

}  // namespace detail

/// Integrates y' = f(t, y) from t0 to t1.
///
/// `observe(t, y, dydt)` is called at t0 and after every accepted step.
/// Steps are shortened so that every time listed in `stops` (ascending,
/// inside (t0, t1]) is hit exactly. Throws IntegrationError on step-size
/// underflow, a non-finite state, or a DomainError raised by `f`; other
/// exceptions from `f` propagate unchanged.
template <std::size_t N, class Rhs, class Observer>
void dopri5(Rhs&& f, double t0, const Vec<N>& y0, double t1, const AdaptiveOptions& opt,
            std::span<const double> stops, Observer&& observe) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = t0;
  Vec<N> y = y0;
  Vec<N> k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, tmp{}, y_new{}, err{};

  auto eval = [&](double tt, const Vec<N>& yy, Vec<N>& out) {
    try {
      out = f(tt, yy);
    } catch (const DomainError& e) {
      throw IntegrationError(std::string("right-hand side failed: ") + e.what(), t);
    }
  };

  if (!detail::all_finite(y)) throw IntegrationError("non-finite initial state", t0);
  eval(t, y, k1);
  observe(t, y, k1);
  if (!(t1 > t0)) return;

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer-Norsett-Wanner starting step heuristic.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  }
  h = std::min({h, opt.max_step, t1 - t0});

  std::size_t next_stop = 0;
  while (next_stop < stops.size() && stops[next_stop] <= t0) ++next_stop;

  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps) throw IntegrationError("step budget exhausted", t);
    const double target = next_stop < stops.size() ? std::min(stops[next_stop], t1) : t1;
    bool lands = false;
    if (t + 1.01 * h >= target) {
      h = target - t;
      lands = true;
    }
    if (h < opt.min_step * std::max(1.0, std::abs(t))) throw IntegrationError("step size underflow", t);

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    eval(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i) {
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    eval(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i) {
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    eval(t + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i) {
      y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    const double t_new = lands ? target : t + h;
    eval(t_new, y_new, k7);
    for (std::size_t i = 0; i < N; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }

    const bool finite = detail::all_finite(y_new) && detail::all_finite(k7);
    const double en = finite ? detail::scaled_rms(err, y, y_new, opt) : std::numeric_limits<double>::infinity();
    if (en <= 1.0) {
      t = t_new;
      y = y_new;
      k1 = k7;
      observe(t, y, k1);
      if (lands && next_stop < stops.size() && target == stops[next_stop]) ++next_stop;
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h = std::min(h * fac, opt.max_step);
    } else {
      const double fac = std::isfinite(en) ? std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9) : 0.25;
      h *= fac;
    }
  }
}

}  // namespace cscdyn::numerics
