#include "cscdyn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "cscdyn/errors.hpp"
#include "cscdyn/slow_manifold.hpp"

namespace cscdyn {

double total_mass(const Grid& grid, const FieldState& s) {
  return integrate_field(grid, s.u) + integrate_field(grid, s.v);
}

namespace {

// Derivative of f along `axis` at every node.
std::vector<double> gradient(const Grid& grid, const std::vector<double>& f, int axis) {
  const std::size_t nx = grid.nodes(0);
  const std::size_t ny = grid.dimension() == 2 ? grid.nodes(1) : 1;
  const std::size_t n = grid.nodes(axis);
  const std::size_t stride = axis == 0 ? ny : 1;
  const double h = grid.spacing(axis);
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t idx = i * ny + j;
      const std::size_t pos = axis == 0 ? i : j;
      if (pos == 0) {
        g[idx] = (-3.0 * f[idx] + 4.0 * f[idx + stride] - f[idx + 2 * stride]) / (2.0 * h);
      } else if (pos == n - 1) {
        g[idx] = (3.0 * f[idx] - 4.0 * f[idx - stride] + f[idx - 2 * stride]) / (2.0 * h);
      } else {
        g[idx] = (f[idx + stride] - f[idx - stride]) / (2.0 * h);
      }
    }
  }
  return g;
}

}  // namespace

double energy_functional(const Grid& grid, const FieldState& s, const FieldState& s_dot) {
  const std::size_t n = grid.size();
  if (s.u.size() != n || s.v.size() != n || s_dot.u.size() != n || s_dot.v.size() != n) {
    throw DomainError("energy_functional: field size does not match the grid");
  }
  std::vector<double> integrand(n, 0.0);
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    const auto gu = gradient(grid, s.u, axis);
    const auto gut = gradient(grid, s_dot.u, axis);
    const auto gv = gradient(grid, s.v, axis);
    const auto gvt = gradient(grid, s_dot.v, axis);
    for (std::size_t i = 0; i < n; ++i) integrand[i] += gut[i] * gu[i] + gvt[i] * gv[i];
  }
  return integrate_field(grid, integrand);
}

double invariant_region_violation(const FieldState& s, const ModelParams& params) {
  if (params.alpha > 1.0) throw PreconditionError("invariant region: requires alpha <= 1 (k^{-1}(alpha) undefined)");
  const double v_max = params.kernel.inverse(params.alpha);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    worst = std::max({worst, -s.u[i], s.u[i] - 1.0, -s.v[i], s.v[i] - v_max});
  }
  return worst;
}

double invariant_region_audit(const FieldTrajectory& trajectory, const ModelParams& params) {
  if (trajectory.states.empty()) throw PreconditionError("invariant_region_audit: trajectory holds no fields");
  double worst = 0.0;
  for (const auto& s : trajectory.states) worst = std::max(worst, invariant_region_violation(s, params));
  return worst;
}

MassSeries mass_series(const FieldTrajectory& trajectory, const ModelParams& params, const Grid& grid) {
  const double omega = grid.measure();
  MassSeries series;
  for (std::size_t i = 0; i < trajectory.record_times.size(); ++i) {
    const MeanState& in = trajectory.record_integrals[i];
    series.push(trajectory.record_times[i], in.p_bar(), trajectory.record_mass_rates[i],
                slow_manifold_residual(params, (1.0 / omega) * in, omega));
  }
  return series;
}

PdeParadoxRun run_paradox_pde(const ModelParams& params_1, const ModelParams& params_2, const Grid& grid,
                              const FieldState& init, const ParadoxOptions& options, const PdeOptions& pde_options) {
  if (!(params_2.alpha > 0.0) || params_1.alpha < params_2.alpha) {
    throw PreconditionError("paradox check: requires alpha_1 >= alpha_2 > 0");
  }
  if (init.u.size() != grid.size() || init.v.size() != grid.size()) {
    throw PreconditionError("paradox_check_pde: initial field size does not match the grid");
  }
  const double omega = grid.measure();
  const MeanState mean{integrate_field(grid, init.u) / omega, integrate_field(grid, init.v) / omega};
  const auto curve = slow_manifold_curve(params_1, linspace(0.0, 1.0, 1001), CurveMethod::RootFind, omega);
  PdeParadoxRun out;
  out.init_distance = distance_to_curve(curve, mean);
  if (!(out.init_distance <= kNearManifoldDistance)) {
    throw PreconditionError("paradox_check_pde: distance of the initial mean state to the slow manifold is " +
                            std::to_string(out.init_distance) + " (limit " +
                            std::to_string(kNearManifoldDistance) + ")");
  }

  PdeOptions opt = pde_options;
  opt.keep_fields = false;
  opt.output_times.clear();
  auto second =
      std::async(std::launch::async, [&] { return integrate_pde(params_2, grid, init, 0.0, options.horizon, opt); });
  out.run_1 = integrate_pde(params_1, grid, init, 0.0, options.horizon, opt);
  out.run_2 = second.get();
  out.report = compare_mass_series(mass_series(out.run_1, params_1, grid), mass_series(out.run_2, params_2, grid),
                                   params_1.alpha, params_2.alpha, options);
  return out;
}

ParadoxReport paradox_check_pde(const ModelParams& params_1, const ModelParams& params_2, const Grid& grid,
                                const FieldState& init, const ParadoxOptions& options, const PdeOptions& pde_options) {
  return run_paradox_pde(params_1, params_2, grid, init, options, pde_options).report;
}

}  // namespace cscdyn
