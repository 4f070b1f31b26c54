#pragma once

#include "cscdyn/grid.hpp"
#include "cscdyn/kernel.hpp"

namespace cscdyn {

/// Non-dimensional parameters of the CSC/CC system.
///
///   u_t = d Lap u + delta k(p) int u
///   v_t =   Lap v + (1 - delta) k(p) int u - alpha v + k(p) int v
struct ModelParams {
  double d = 1.0;      ///< diffusion ratio D_u / D_v
  double alpha = 0.5;  ///< CC death rate over proliferation rate
  double delta = 0.1;  ///< fraction of symmetric CSC divisions
  KernelSpec kernel{};
  DomainSpec domain = DomainSpec::interval(1.0, 101);

  /// d > 0, alpha > 0, 0 <= delta <= 1. Throws DomainError naming the violated bound.
  void validate() const;

  [[nodiscard]] ModelParams with_alpha(double a) const {
    ModelParams p = *this;
    p.alpha = a;
    return p;
  }
  [[nodiscard]] ModelParams with_delta(double dl) const {
    ModelParams p = *this;
    p.delta = dl;
    return p;
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Spatially uniform (mean) state of the ODE reduction.
struct MeanState {
  double u_bar = 0.0;
  double v_bar = 0.0;

  [[nodiscard]] double p_bar() const noexcept { return u_bar + v_bar; }

  friend MeanState operator+(MeanState a, MeanState b) { return {a.u_bar + b.u_bar, a.v_bar + b.v_bar}; }
  friend MeanState operator-(MeanState a, MeanState b) { return {a.u_bar - b.u_bar, a.v_bar - b.v_bar}; }
  friend MeanState operator*(double s, MeanState a) { return {s * a.u_bar, s * a.v_bar}; }
  friend bool operator==(const MeanState&, const MeanState&) = default;
};

}  // namespace cscdyn
