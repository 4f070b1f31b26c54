#pragma once

#include <cstddef>
#include <vector>

#include "cscdyn/grid.hpp"
#include "cscdyn/model.hpp"

namespace cscdyn {

/// Nodal CSC (u) and CC (v) densities on a Grid.
struct FieldState {
  std::vector<double> u;
  std::vector<double> v;

  [[nodiscard]] static FieldState constant(const Grid& grid, double u, double v);
  [[nodiscard]] std::size_t size() const noexcept { return u.size(); }
};

/// Method-of-lines right-hand side of the full non-local system
///   u_t = d L u + delta k(u+v) I_u
///   v_t =   L v + (1 - delta) k(u+v) I_u - alpha v + k(u+v) I_v
/// with I_u, I_v the quadrature integrals of u and v.
[[nodiscard]] FieldState pde_rhs(const ModelParams& params, const Grid& grid, const FieldState& s);

/// Right-hand side of the fast system (delta = 0):
///   u_t = d L u,   v_t = L v - alpha v + k(p) int p.
[[nodiscard]] FieldState fast_rhs(const ModelParams& params, const Grid& grid, const FieldState& s);

/// Max-norm of pde_rhs(s).
[[nodiscard]] double stationarity_residual(const ModelParams& params, const Grid& grid, const FieldState& s);

enum class Stepper {
  ExplicitRk4,           ///< classical RK4, step bounded by the diffusion stability limit
  IntegratingFactorRk4,  ///< RK4 on the reaction terms, diffusion propagated exactly in the cosine basis
};

struct PdeOptions {
  Stepper stepper = Stepper::ExplicitRk4;
  double cfl_safety = 0.9;
  /// Requested step. 0 selects the stability-limited step (ExplicitRk4) or
  /// max_dt (IntegratingFactorRk4). An explicit request above the
  /// stability limit is a ConfigError.
  double dt = 0.0;
  double max_dt = 0.02;
  std::vector<double> output_times;  ///< snapshot times in (t0, t1]; t1 is always included
  bool keep_fields = true;           ///< store the field at every snapshot
  double record_interval = 0.05;     ///< minimum spacing of the per-step mass record
  bool fast_system = false;          ///< integrate fast_rhs instead of pde_rhs
};

/// Largest explicit RK4 step allowed: safety * h^2 / (2 n_dim max(d, 1)).
[[nodiscard]] double diffusion_step_limit(const ModelParams& params, const Grid& grid, double safety);

/// Computed orbit of the semiflow.
struct FieldTrajectory {
  // Snapshots at the requested output times (t0 included).
  std::vector<double> times;
  std::vector<FieldState> states;  ///< empty unless keep_fields
  std::vector<double> masses;      ///< int (u + v) per snapshot
  std::vector<MeanState> integrals;  ///< (int u, int v) per snapshot

  // Step-level record, spaced by at least record_interval.
  std::vector<double> record_times;
  std::vector<MeanState> record_integrals;
  std::vector<double> record_mass_rates;  ///< d/dt int (u + v)

  FieldState final_state;
  double dt = 0.0;
  std::size_t steps = 0;
};

/// Time integration from init on [t0, t1]. Output times are hit exactly by
/// shortening the last substep. Throws ConfigError for a fixed explicit step
/// above the stability limit, IntegrationError on a non-finite state.
[[nodiscard]] FieldTrajectory integrate_pde(const ModelParams& params, const Grid& grid, const FieldState& init,
                                            double t0, double t1, const PdeOptions& options = {});

}  // namespace cscdyn
