#include "cscdyn/slow_manifold.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "cscdyn/dopri.hpp"
#include "cscdyn/errors.hpp"

namespace cscdyn {

double slow_manifold_residual(const ModelParams& params, const MeanState& s, double omega_measure) {
  const double p = s.p_bar();
  return params.kernel(p) * omega_measure * p - params.alpha * s.v_bar;
}

double slow_manifold_start(const ModelParams& params, double omega_measure) {
  return params.kernel.inverse(params.alpha / omega_measure);
}

namespace {

void require_curve_alpha(const ModelParams& params, double omega_measure) {
  if (!(params.alpha > 0.0) || params.alpha > omega_measure) {
    throw PreconditionError("slow manifold: requires 0 < alpha <= |Omega| (alpha = " +
                            std::to_string(params.alpha) + ", |Omega| = " + std::to_string(omega_measure) + ")");
  }
}

// In terms of the total density: g(p) = k(p)|Omega|p - alpha (p - u).
double root_find_value(const ModelParams& params, double u, double omega_measure) {
  if (u <= 0.0) return slow_manifold_start(params, omega_measure);
  if (u >= 1.0) return 0.0;
  auto g = [&](double p) { return params.kernel(p) * omega_measure * p - params.alpha * (p - u); };
  const double g_lo = g(u);
  const double g_hi = g(1.0);
  if (!(g_lo > 0.0) || !(g_hi < 0.0)) throw CurveError("slow manifold: root not bracketed", u);
  std::uintmax_t iterations = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(g, u, 1.0, g_lo, g_hi,
                                                          boost::math::tools::eps_tolerance<double>(), iterations);
  if (iterations >= 200) throw CurveError("slow manifold: root-finder did not converge", u);
  return std::max(0.5 * (lo + hi) - u, 0.0);
}

}  // namespace

double slow_manifold_value(const ModelParams& params, double u, double omega_measure) {
  require_curve_alpha(params, omega_measure);
  if (u < 0.0 || u > 1.0) throw DomainError("slow manifold: u must lie in [0,1]");
  return root_find_value(params, u, omega_measure);
}

SlowManifoldCurve slow_manifold_curve(const ModelParams& params, std::span<const double> u_grid, CurveMethod method,
                                      double omega_measure) {
  require_curve_alpha(params, omega_measure);
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    if (u_grid[i] < 0.0 || u_grid[i] > 1.0 || (i > 0 && !(u_grid[i] > u_grid[i - 1]))) {
      throw DomainError("slow manifold: u grid must be strictly increasing inside [0,1]");
    }
  }

  SlowManifoldCurve curve;
  curve.alpha = params.alpha;
  curve.omega_measure = omega_measure;
  curve.samples.reserve(u_grid.size());

  if (method == CurveMethod::RootFind) {
    for (double u : u_grid) curve.samples.push_back({u, root_find_value(params, u, omega_measure)});
    return curve;
  }

  const double v0 = slow_manifold_start(params, omega_measure);
  auto slope = [&](double u, const numerics::Vec<1>& v) {
    // dopri stages can land past p = 1
    const double p = std::min(u + v[0], 1.0);
    const double n = omega_measure * (params.kernel.derivative(p) * p + params.kernel(p));
    const double denom = params.alpha - n;
    if (std::abs(denom) < 1e-12) throw SingularPointError("slow manifold: vanishing graph-ODE denominator", u);
    return numerics::Vec<1>{n / denom};
  };
  std::vector<double> stops(u_grid.begin(), u_grid.end());
  std::size_t next = 0;
  auto observe = [&](double u, const numerics::Vec<1>& v, const numerics::Vec<1>&) {
    while (next < stops.size() && stops[next] == u) {
      curve.samples.push_back({u, v[0]});
      ++next;
    }
  };
  numerics::AdaptiveOptions opts{.atol = 1e-14, .rtol = 1e-12};
  if (!stops.empty() && stops.back() > 0.0) {
    numerics::dopri5<1>(slope, 0.0, numerics::Vec<1>{v0}, stops.back(), opts, stops, observe);
  } else if (!stops.empty()) {
    observe(0.0, {v0}, {0.0});
  }
  if (curve.samples.size() != u_grid.size()) {
    throw CurveError("slow manifold: graph ODE missed a grid point", next < stops.size() ? stops[next] : 1.0);
  }
  return curve;
}

MeanState on_manifold_state(const ModelParams& params, double p_total, double omega_measure) {
  if (!(p_total >= 0.0) || p_total > 1.0) throw PreconditionError("on_manifold_state: p must lie in [0,1]");
  const double v = params.kernel(p_total) * omega_measure * p_total / params.alpha;
  const double u = p_total - v;
  if (u < 0.0) {
    throw PreconditionError("on_manifold_state: no slow-manifold point with p = " + std::to_string(p_total) +
                            " for alpha = " + std::to_string(params.alpha));
  }
  return {u, v};
}

double distance_to_curve(const SlowManifoldCurve& curve, const MeanState& point) {
  const auto& s = curve.samples;
  if (s.empty()) throw DomainError("distance_to_curve: empty curve");
  double best = std::numeric_limits<double>::infinity();
  if (s.size() == 1) return std::hypot(point.u_bar - s[0].u_bar, point.v_bar - s[0].v_bar);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double ex = s[i + 1].u_bar - s[i].u_bar;
    const double ey = s[i + 1].v_bar - s[i].v_bar;
    const double len2 = ex * ex + ey * ey;
    double tau = len2 > 0.0 ? ((point.u_bar - s[i].u_bar) * ex + (point.v_bar - s[i].v_bar) * ey) / len2 : 0.0;
    tau = std::clamp(tau, 0.0, 1.0);
    best = std::min(best, std::hypot(point.u_bar - (s[i].u_bar + tau * ex), point.v_bar - (s[i].v_bar + tau * ey)));
  }
  return best;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = a;
    return x;
  }
  for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  x.back() = b;
  return x;
}

}  // namespace cscdyn
