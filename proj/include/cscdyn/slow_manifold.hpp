#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cscdyn/model.hpp"

namespace cscdyn {

/// M(u, v) = k(p) |Omega| p - alpha v with p = u + v. The slow manifold is M = 0.
///
/// ODE-level work uses |Omega| = 1, where M coincides with dp/dt of the reduction.
[[nodiscard]] double slow_manifold_residual(const ModelParams& params, const MeanState& s, double omega_measure = 1.0);

/// Left end of the slow manifold: the nontrivial root of M(0, v) = 0,
/// v = k^{-1}(alpha / |Omega|). Throws NoSolutionError when alpha > |Omega|.
[[nodiscard]] double slow_manifold_start(const ModelParams& params, double omega_measure = 1.0);

enum class CurveMethod { RootFind, GraphOde };

struct SlowManifoldCurve {
  double alpha = 0.0;
  double omega_measure = 1.0;
  std::vector<MeanState> samples;  ///< (u, v~(u)) in increasing u
};

/// Graph v~(u) of the slow manifold over `u_grid` (ascending, inside [0,1]).
///
/// RootFind solves M(u, v) = 0 for v in [0, 1 - u] at every abscissa (M is
/// concave in p, so the bracket holds exactly one root for 0 < u < 1).
/// GraphOde integrates dv~/du = N / (alpha - N), N = |Omega| (k'(p) p + k(p)),
/// from (0, slow_manifold_start).
///
/// Requires 0 < alpha <= |Omega|; throws PreconditionError otherwise,
/// CurveError on a bracketing failure and SingularPointError when alpha - N vanishes.
[[nodiscard]] SlowManifoldCurve slow_manifold_curve(const ModelParams& params, std::span<const double> u_grid,
                                                    CurveMethod method, double omega_measure = 1.0);

/// Single root-find evaluation of v~(u).
[[nodiscard]] double slow_manifold_value(const ModelParams& params, double u, double omega_measure = 1.0);

/// Point of the slow manifold with total density p: v = k(p)|Omega|p / alpha, u = p - v.
/// Throws PreconditionError when that point leaves [0,1] x [0, inf).
[[nodiscard]] MeanState on_manifold_state(const ModelParams& params, double p_total, double omega_measure = 1.0);

/// Euclidean distance from `point` to the polyline through the curve samples.
[[nodiscard]] double distance_to_curve(const SlowManifoldCurve& curve, const MeanState& point);

/// n equally spaced values from a to b inclusive.
[[nodiscard]] std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace cscdyn
