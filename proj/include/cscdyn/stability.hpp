#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cscdyn/grid.hpp"
#include "cscdyn/model.hpp"
#include "cscdyn/ode.hpp"
#include "cscdyn/pde.hpp"
#include "cscdyn/slow_manifold.hpp"

namespace cscdyn {

/// |M| below which a point counts as lying on the slow manifold.
inline constexpr double kManifoldTolerance = 1e-8;

struct ModeEigenvalues {
  double lambda_1 = 0.0;
  double lambda_2 = 0.0;
};

/// Eigenvalues of -mu D + J_M, D = diag(d, 1), at a slow-manifold point in
/// the uniform-mode form
///   lambda_1 = -mu d,   lambda_2 = |Omega| k'(p) p - mu + |Omega| k(p) - alpha.
/// Throws PreconditionError off the manifold or for mu < 0.
[[nodiscard]] ModeEigenvalues mode_eigenvalues(const ModelParams& params, const MeanState& point, double mu,
                                               double omega_measure = 1.0);

/// lambda_2 rewritten with alpha v = k(p) |Omega| p:
///   |Omega| k'(p) p - mu - |Omega| k(p) u / v.
/// At v = 0 the last term is replaced by its limit along the curve,
/// alpha u / p; at the origin it has none (PreconditionError).
[[nodiscard]] double lambda_2_substituted(const ModelParams& params, const MeanState& point, double mu,
                                          double omega_measure = 1.0);

/// Eigenvalues of the exact linearization of the fast system at a constant
/// state, restricted to a Neumann mode with eigenvalue mu. Non-constant modes
/// have zero mean, so the integral term only feeds the constant mode:
///   mu > 0: (-mu d, |Omega| k'(p) p - mu - alpha)
///   mu = 0: (0,     |Omega| (k'(p) p + k(p)) - alpha)
[[nodiscard]] ModeEigenvalues nonlocal_mode_eigenvalues(const ModelParams& params, const MeanState& point, double mu,
                                                        double omega_measure = 1.0);

enum class PdeClassification { StableNode, Saddle, Degenerate };
[[nodiscard]] std::string to_string(PdeClassification c);

struct ModeRow {
  std::size_t j = 0;
  double mu = 0.0;
  double lambda_1 = 0.0;
  double lambda_2 = 0.0;
};

struct ConditionValue {
  std::string name;
  double value = 0.0;
};

struct StabilityReport {
  Equilibrium equilibrium;
  std::vector<ModeRow> modes;  ///< j = 1 .. j_max
  PdeClassification classification = PdeClassification::Degenerate;
  std::vector<ConditionValue> conditions;
};

/// Linear stability of a constant equilibrium under Neumann conditions.
///
/// P0 is a stable node iff -mu_1 d + k(0) < 0 and -mu_1 + k(0) - alpha < 0
/// and a saddle otherwise; its mode rows are (-mu_j d + k(0), -mu_j + k(0) - alpha).
/// P1 and P2 are stable, with mode rows from nonlocal_mode_eigenvalues. A
/// condition value within `tolerance` of zero gives Degenerate.
/// mu_j are the analytic Neumann eigenvalues of `domain`.
[[nodiscard]] StabilityReport classify_pde_equilibrium(const ModelParams& params, const Equilibrium& e,
                                                       const DomainSpec& domain, std::size_t j_max = 10,
                                                       double tolerance = kDegenerateTolerance);

enum class ModeForm {
  Uniform,   ///< mode_eigenvalues
  NonLocal,  ///< nonlocal_mode_eigenvalues
};

struct MarginOptions {
  std::size_t j_max = 10;
  ModeForm form = ModeForm::Uniform;
  /// Use the eigenvalues of the discrete Laplacian on this grid instead of the analytic ones.
  const Grid* grid = nullptr;
};

struct MarginReport {
  std::vector<double> margins;  ///< per curve sample: min over j of -max(lambda_1, lambda_2)
  double infimum = 0.0;
  std::size_t arg_infimum = 0;
  MeanState location{};
  bool hyperbolic = false;      ///< every margin > 0
};

/// Normal-hyperbolicity margin along a slow-manifold curve, over modes 1..j_max.
[[nodiscard]] MarginReport normal_hyperbolicity_margin(const ModelParams& params, const SlowManifoldCurve& curve,
                                                       const DomainSpec& domain, const MarginOptions& options = {});

/// Distance of the mean state of every record entry with t >= from to the curve.
struct DistanceSeries {
  std::vector<double> t;
  std::vector<double> distance;
};
[[nodiscard]] DistanceSeries mean_distance_history(const FieldTrajectory& trajectory, const Grid& grid,
                                                   const SlowManifoldCurve& curve, double from = 0.0);

struct ScalingRow {
  double delta = 0.0;
  double sup_distance = 0.0;
  double at_time = 0.0;
};

struct ScalingOptions {
  double settle_time = 20.0;
  double horizon = 300.0;
  std::size_t curve_points = 1001;
  PdeOptions pde{};
};

/// For each delta (positive, strictly decreasing) integrates the PDE from
/// `init` and reports the supremum over t >= settle_time of the distance of
/// the mean state (integrals / |Omega|) to the slow-manifold curve. Runs are
/// executed concurrently.
[[nodiscard]] std::vector<ScalingRow> manifold_distance_scaling(const ModelParams& params,
                                                                const std::vector<double>& deltas, const Grid& grid,
                                                                const FieldState& init,
                                                                const ScalingOptions& options = {});

}  // namespace cscdyn
