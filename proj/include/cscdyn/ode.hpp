#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "cscdyn/dopri.hpp"
#include "cscdyn/model.hpp"

namespace cscdyn {

enum class EquilibriumLabel { Extinction, PureCC, PureCSC };

/// Constant equilibrium of the reduced system: P0 = (0,0), P1 = (0, v*), P2 = (1,0).
struct Equilibrium {
  EquilibriumLabel label = EquilibriumLabel::Extinction;
  MeanState point{};
  bool exists = true;
};

[[nodiscard]] std::string to_string(EquilibriumLabel label);

enum class Classification { StableNode, UnstableNode, Saddle, StableSpiral, UnstableSpiral, Degenerate };

[[nodiscard]] std::string to_string(Classification c);

using Matrix2 = std::array<std::array<double, 2>, 2>;

struct Eigenpair2 {
  std::complex<double> first;
  std::complex<double> second;
};

/// Roots of the characteristic polynomial of a real 2x2 matrix, ordered by real part (descending).
[[nodiscard]] Eigenpair2 eigenvalues(const Matrix2& m);

/// Right-hand side of the diffusion-free reduction:
///   du/dt = delta k(p) u,   dv/dt = (1 - delta) k(p) u - alpha v + k(p) v.
[[nodiscard]] MeanState ode_rhs(const ModelParams& params, const MeanState& s);

/// P0 and P2 always, P1 flagged `exists = false` when k(v) = alpha has no root.
[[nodiscard]] std::vector<Equilibrium> equilibria(const ModelParams& params);

/// Analytic Jacobian of ode_rhs with respect to (u_bar, v_bar). Row i is the
/// gradient of component i. At p = 1 the left derivative of k is used.
[[nodiscard]] Matrix2 ode_jacobian(const ModelParams& params, const MeanState& s);

struct OdeClassification {
  Classification kind = Classification::Degenerate;
  Eigenpair2 eigenvalues{};
};

/// Threshold on |Re lambda| below which an eigenvalue counts as zero.
inline constexpr double kDegenerateTolerance = 1e-9;

/// Classifies an equilibrium from the eigenvalues of ode_jacobian.
/// Throws PreconditionError for an equilibrium flagged as non-existent.
[[nodiscard]] OdeClassification classify_ode_equilibrium(const ModelParams& params, const Equilibrium& e,
                                                         double tolerance = kDegenerateTolerance);

struct OdeOptions {
  numerics::AdaptiveOptions adaptive{.atol = 1e-10, .rtol = 1e-8, .max_step = 0.5};
};

/// Accepted steps of an ODE integration with cubic Hermite dense output.
class OdeTrajectory {
 public:
  OdeTrajectory() = default;

  void append(double t, const MeanState& s, const MeanState& rate);

  [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
  [[nodiscard]] const std::vector<MeanState>& states() const noexcept { return states_; }
  [[nodiscard]] const std::vector<MeanState>& rates() const noexcept { return rates_; }
  [[nodiscard]] std::vector<double> masses() const;

  [[nodiscard]] double start_time() const { return times_.front(); }
  [[nodiscard]] double end_time() const { return times_.back(); }
  [[nodiscard]] const MeanState& final_state() const { return states_.back(); }

  /// Hermite interpolant of the state at t in [start_time, end_time].
  [[nodiscard]] MeanState state_at(double t) const;
  [[nodiscard]] double mass_at(double t) const { return state_at(t).p_bar(); }

 private:
  std::vector<double> times_;
  std::vector<MeanState> states_;
  std::vector<MeanState> rates_;
};

/// Adaptive Dormand-Prince integration of ode_rhs on [t0, t1].
/// Throws IntegrationError (with the last good time) on failure.
[[nodiscard]] OdeTrajectory integrate_ode(const ModelParams& params, const MeanState& init, double t0, double t1,
                                          const OdeOptions& options = {});

/// Distance of s outside the triangle {u in [0,1], v >= 0, u + v <= 1}; 0 inside.
[[nodiscard]] double triangle_violation(const MeanState& s);

}  // namespace cscdyn
