#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cscdyn/grid.hpp"

namespace cscdyn {

/// Exact propagator exp(tau * c * L_h) of the discrete Neumann Laplacian.
///
/// The eigenvectors of L_h on a node-centred grid with reflected ghost
/// nodes are the DCT-I basis vectors cos(j pi i / (n-1)), so the propagator
/// is a forward DCT-I, a diagonal scaling, and a backward DCT-I. Transforms
/// are delegated to FFTW (REDFT00). One instance must not be shared by
/// concurrently running integrations.
class NeumannHeatPropagator {
 public:
  explicit NeumannHeatPropagator(const Grid& grid);
  ~NeumannHeatPropagator();
  NeumannHeatPropagator(const NeumannHeatPropagator&) = delete;
  NeumannHeatPropagator& operator=(const NeumannHeatPropagator&) = delete;
  NeumannHeatPropagator(NeumannHeatPropagator&&) noexcept;
  NeumannHeatPropagator& operator=(NeumannHeatPropagator&&) noexcept;

  /// Per-mode factors exp(-c * mu_h * tau), already divided by the DCT-I
  /// round-trip normalisation.
  [[nodiscard]] std::vector<double> multipliers(double diffusivity, double tau) const;

  /// out = exp(tau c L_h) in, with factors from multipliers(c, tau). in and out may alias.
  void apply(std::span<const double> in, std::span<double> out, std::span<const double> factors);

  [[nodiscard]] std::size_t size() const noexcept { return eigenvalues_.size(); }

 private:
  struct Plan;
  std::unique_ptr<Plan> plan_;
  std::vector<double> eigenvalues_;  ///< mu_h per transform coefficient, row-major
  double normalisation_ = 1.0;
  std::vector<double> scratch_;
};

}  // namespace cscdyn
