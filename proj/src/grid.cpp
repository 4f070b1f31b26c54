#include "cscdyn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cscdyn/errors.hpp"

namespace cscdyn {

DomainSpec DomainSpec::interval(double length, std::size_t nodes) {
  DomainSpec d;
  d.dimension = 1;
  d.lengths = {length, 1.0};
  d.nodes = {nodes, 1};
  return d;
}

DomainSpec DomainSpec::box(double lx, double ly, std::size_t nx, std::size_t ny) {
  DomainSpec d;
  d.dimension = 2;
  d.lengths = {lx, ly};
  d.nodes = {nx, ny};
  return d;
}

double DomainSpec::measure() const {
  double m = 1.0;
  for (int a = 0; a < dimension; ++a) m *= lengths[a];
  return m;
}

void DomainSpec::validate() const {
  if (dimension != 1 && dimension != 2) {
    throw DomainError("domain: dimension must be 1 or 2, got " + std::to_string(dimension));
  }
  for (int a = 0; a < dimension; ++a) {
    if (!std::isfinite(lengths[a]) || lengths[a] <= 0.0) {
      throw DomainError("domain: length on axis " + std::to_string(a) + " must be > 0");
    }
    if (nodes[a] < 3) {
      throw DomainError("domain: need at least 3 nodes on axis " + std::to_string(a) + ", got " +
                        std::to_string(nodes[a]));
    }
  }
}

Grid::Grid(const DomainSpec& domain) : domain_(domain) {
  domain_.validate();
  if (domain_.dimension == 1) domain_.nodes[1] = 1;

  std::array<std::vector<double>, 2> axis_weights;
  for (int a = 0; a < 2; ++a) {
    if (a >= domain_.dimension) {
      spacing_[a] = 1.0;
      axis_weights[a] = {1.0};
      continue;
    }
    const std::size_t n = domain_.nodes[a];
    spacing_[a] = domain_.lengths[a] / static_cast<double>(n - 1);
    axis_weights[a].assign(n, spacing_[a]);
    axis_weights[a].front() = axis_weights[a].back() = 0.5 * spacing_[a];
  }

  weights_.resize(axis_weights[0].size() * axis_weights[1].size());
  for (std::size_t i = 0; i < axis_weights[0].size(); ++i) {
    for (std::size_t j = 0; j < axis_weights[1].size(); ++j) {
      weights_[i * axis_weights[1].size() + j] = axis_weights[0][i] * axis_weights[1][j];
    }
  }
}

double Grid::coordinate(int axis, std::size_t i) const {
  if (i == domain_.nodes.at(axis) - 1) return domain_.lengths[axis];
  return static_cast<double>(i) * spacing_.at(axis);
}

std::array<double, 2> Grid::position(std::size_t index) const {
  const std::size_t ny = domain_.nodes[1];
  if (domain_.dimension == 1) return {coordinate(0, index), 0.0};
  return {coordinate(0, index / ny), coordinate(1, index % ny)};
}

double Grid::min_spacing() const {
  return domain_.dimension == 1 ? spacing_[0] : std::min(spacing_[0], spacing_[1]);
}

Grid build_grid(const DomainSpec& domain) { return Grid(domain); }

namespace {

inline void check_size(const Grid& grid, std::size_t n, const char* what) {
  if (n != grid.size()) {
    throw DomainError(std::string(what) + ": field has " + std::to_string(n) + " entries, grid has " +
                      std::to_string(grid.size()));
  }
}

// 1D second difference with reflection along a strided line.
inline void line_laplacian(const double* f, double* out, std::size_t n, std::size_t stride, double inv_h2,
                           bool accumulate) {
  auto emit = [&](std::size_t i, double value) {
    if (accumulate) {
      out[i * stride] += value;
    } else {
      out[i * stride] = value;
    }
  };
  emit(0, 2.0 * (f[stride] - f[0]) * inv_h2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    emit(i, (f[(i - 1) * stride] - 2.0 * f[i * stride] + f[(i + 1) * stride]) * inv_h2);
  }
  emit(n - 1, 2.0 * (f[(n - 2) * stride] - f[(n - 1) * stride]) * inv_h2);
}

}  // namespace

void neumann_laplacian_apply(const Grid& grid, std::span<const double> field, std::span<double> out) {
  check_size(grid, field.size(), "neumann_laplacian_apply");
  check_size(grid, out.size(), "neumann_laplacian_apply");
  const std::size_t nx = grid.nodes(0);
  const double inv_hx2 = 1.0 / (grid.spacing(0) * grid.spacing(0));
  if (grid.dimension() == 1) {
    line_laplacian(field.data(), out.data(), nx, 1, inv_hx2, false);
    return;
  }
  const std::size_t ny = grid.nodes(1);
  const double inv_hy2 = 1.0 / (grid.spacing(1) * grid.spacing(1));
  for (std::size_t i = 0; i < nx; ++i) {
    line_laplacian(field.data() + i * ny, out.data() + i * ny, ny, 1, inv_hy2, false);
  }
  for (std::size_t j = 0; j < ny; ++j) {
    line_laplacian(field.data() + j, out.data() + j, nx, ny, inv_hx2, true);
  }
}

std::vector<double> neumann_laplacian_apply(const Grid& grid, std::span<const double> field) {
  std::vector<double> out(grid.size());
  neumann_laplacian_apply(grid, field, out);
  return out;
}

double integrate_field(const Grid& grid, std::span<const double> field) {
  check_size(grid, field.size(), "integrate_field");
  const auto w = grid.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) sum += w[i] * field[i];
  return sum;
}

namespace {

std::vector<double> combine_axes(const std::vector<double>& a, const std::vector<double>& b, std::size_t count) {
  std::vector<double> all;
  all.reserve(a.size() * b.size());
  for (double x : a) {
    for (double y : b) all.push_back(x + y);
  }
  std::sort(all.begin(), all.end());
  if (all.size() > count) all.resize(count);
  return all;
}

}  // namespace

std::vector<double> neumann_eigenvalues(const DomainSpec& domain, std::size_t count) {
  if (domain.dimension != 1 && domain.dimension != 2) {
    throw NotImplementedError("neumann_eigenvalues: only intervals and rectangles are supported");
  }
  for (int a = 0; a < domain.dimension; ++a) {
    if (!(domain.lengths[a] > 0.0)) throw DomainError("neumann_eigenvalues: length must be > 0");
  }
  auto axis = [&](int a) {
    std::vector<double> mu(count);
    for (std::size_t j = 0; j < count; ++j) {
      const double k = static_cast<double>(j) * std::numbers::pi / domain.lengths[a];
      mu[j] = k * k;
    }
    return mu;
  };
  if (domain.dimension == 1) return axis(0);
  return combine_axes(axis(0), axis(1), count);
}

std::vector<double> discrete_neumann_eigenvalues(const Grid& grid, std::size_t count) {
  auto axis = [&](int a) {
    const std::size_t n = grid.nodes(a);
    const double h = grid.spacing(a);
    std::vector<double> mu(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double theta = static_cast<double>(j) * std::numbers::pi / static_cast<double>(n - 1);
      mu[j] = 2.0 / (h * h) * (1.0 - std::cos(theta));
    }
    return mu;
  };
  if (grid.dimension() == 1) {
    auto mu = axis(0);
    if (mu.size() > count) mu.resize(count);
    return mu;
  }
  return combine_axes(axis(0), axis(1), count);
}

}  // namespace cscdyn
