#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace cscdyn {

/// Box domain (0,L1) or (0,L1)x(0,L2) with a uniform node count per axis.
struct DomainSpec {
  int dimension = 1;
  std::array<double, 2> lengths{1.0, 1.0};
  std::array<std::size_t, 2> nodes{101, 101};

  static DomainSpec interval(double length, std::size_t nodes);
  static DomainSpec box(double lx, double ly, std::size_t nx, std::size_t ny);

  /// |Omega|, the product of the side lengths.
  [[nodiscard]] double measure() const;

  /// Throws DomainError on a dimension other than 1 or 2, non-positive
  /// lengths, or fewer than 3 nodes on an axis.
  void validate() const;

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

/// Uniform node-centred grid with trapezoid quadrature weights.
///
/// Nodes include the boundary. In 2D the flattened index of node (i, j),
/// i along axis 0 and j along axis 1, is i * nodes(1) + j (row-major).
class Grid {
 public:
  explicit Grid(const DomainSpec& domain);

  [[nodiscard]] const DomainSpec& domain() const noexcept { return domain_; }
  [[nodiscard]] int dimension() const noexcept { return domain_.dimension; }
  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] std::size_t nodes(int axis) const { return domain_.nodes.at(axis); }
  [[nodiscard]] double spacing(int axis) const { return spacing_.at(axis); }
  [[nodiscard]] double measure() const { return domain_.measure(); }

  /// Coordinate of node `i` along `axis`.
  [[nodiscard]] double coordinate(int axis, std::size_t i) const;
  /// Coordinates (x[, y]) of flattened node `index`.
  [[nodiscard]] std::array<double, 2> position(std::size_t index) const;

  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

  /// Smallest spacing over the active axes.
  [[nodiscard]] double min_spacing() const;

 private:
  DomainSpec domain_;
  std::array<double, 2> spacing_{};
  std::vector<double> weights_;
};

[[nodiscard]] Grid build_grid(const DomainSpec& domain);

/// Five-point (3-point in 1D) Laplacian with reflected ghost nodes.
///
/// Boundary rows read f[-1] = f[1], which gives the zero-flux closure. The
/// resulting operator annihilates constants, is symmetric in the quadrature
/// inner product and satisfies sum_i w_i (Lf)_i = 0.
void neumann_laplacian_apply(const Grid& grid, std::span<const double> field, std::span<double> out);
[[nodiscard]] std::vector<double> neumann_laplacian_apply(const Grid& grid, std::span<const double> field);

/// Quadrature-weighted sum approximating the integral over the domain.
[[nodiscard]] double integrate_field(const Grid& grid, std::span<const double> field);

/// Analytic Neumann eigenvalues of -Laplacian on the box, ascending with
/// multiplicity, starting at mu_0 = 0.
[[nodiscard]] std::vector<double> neumann_eigenvalues(const DomainSpec& domain, std::size_t count);

/// Eigenvalues of -L_h for the discrete operator above, ascending with multiplicity:
/// per axis (2/h^2)(1 - cos(j pi h / L)), j = 0..n-1, summed over axes in 2D.
[[nodiscard]] std::vector<double> discrete_neumann_eigenvalues(const Grid& grid, std::size_t count);

}  // namespace cscdyn
