#pragma once

#include "cscdyn/grid.hpp"
#include "cscdyn/model.hpp"
#include "cscdyn/paradox.hpp"
#include "cscdyn/pde.hpp"

namespace cscdyn {

/// int (u + v) dx by quadrature.
[[nodiscard]] double total_mass(const Grid& grid, const FieldState& s);

/// E = int (grad u_t . grad u + grad v_t . grad v) dx with s_dot = pde_rhs(s).
/// Gradients are centred in the interior and second-order one-sided at the
/// boundary nodes. Throws DomainError on a size mismatch.
[[nodiscard]] double energy_functional(const Grid& grid, const FieldState& s, const FieldState& s_dot);

/// Largest distance of a nodal value outside R = [0,1] x [0, k^{-1}(alpha)].
/// Throws PreconditionError for alpha > 1, where R is undefined.
[[nodiscard]] double invariant_region_violation(const FieldState& s, const ModelParams& params);

/// Worst invariant_region_violation over the stored snapshots. Requires a
/// trajectory integrated with keep_fields.
[[nodiscard]] double invariant_region_audit(const FieldTrajectory& trajectory, const ModelParams& params);

/// Mass series built from the step record of a PDE run; the residual is
/// evaluated at the mean state (int u, int v) / |Omega|.
[[nodiscard]] MassSeries mass_series(const FieldTrajectory& trajectory, const ModelParams& params, const Grid& grid);

/// Largest admissible distance of the initial mean state from the slow manifold.
inline constexpr double kNearManifoldDistance = 1e-3;

struct PdeParadoxRun {
  ParadoxReport report;
  FieldTrajectory run_1;
  FieldTrajectory run_2;
  double init_distance = 0.0;  ///< distance of the initial mean state to the alpha_1 slow manifold
};

/// PDE version of the growth-paradox test. Both runs start from `init`, whose
/// mean state must lie within kNearManifoldDistance of the alpha_1 slow
/// manifold (PreconditionError naming the measured distance otherwise), and
/// are integrated concurrently on [0, horizon].
[[nodiscard]] PdeParadoxRun run_paradox_pde(const ModelParams& params_1, const ModelParams& params_2, const Grid& grid,
                                            const FieldState& init, const ParadoxOptions& options,
                                            const PdeOptions& pde_options = {});

[[nodiscard]] ParadoxReport paradox_check_pde(const ModelParams& params_1, const ModelParams& params_2,
                                              const Grid& grid, const FieldState& init, const ParadoxOptions& options,
                                              const PdeOptions& pde_options = {});

}  // namespace cscdyn
