#include "cscdyn/cosine_transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "cscdyn/errors.hpp"

namespace cscdyn {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> axis_eigenvalues(const Grid& grid, int axis) {
  const std::size_t n = grid.nodes(axis);
  const double h = grid.spacing(axis);
  std::vector<double> mu(n);
  for (std::size_t j = 0; j < n; ++j) {
    mu[j] = 2.0 / (h * h) * (1.0 - std::cos(static_cast<double>(j) * std::numbers::pi / static_cast<double>(n - 1)));
  }
  return mu;
}

}  // namespace

struct NeumannHeatPropagator::Plan {
  fftw_plan handle = nullptr;
  ~Plan() {
    if (handle != nullptr) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(handle);
    }
  }
};

NeumannHeatPropagator::NeumannHeatPropagator(const Grid& grid) : plan_(std::make_unique<Plan>()) {
  scratch_.assign(grid.size(), 0.0);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (grid.dimension() == 1) {
    const auto n = static_cast<int>(grid.nodes(0));
    eigenvalues_ = axis_eigenvalues(grid, 0);
    normalisation_ = 2.0 * (n - 1);
    std::lock_guard lock(planner_mutex());
    plan_->handle = fftw_plan_r2r_1d(n, scratch_.data(), scratch_.data(), FFTW_REDFT00, flags);
  } else {
    const auto nx = static_cast<int>(grid.nodes(0));
    const auto ny = static_cast<int>(grid.nodes(1));
    const auto mx = axis_eigenvalues(grid, 0);
    const auto my = axis_eigenvalues(grid, 1);
    eigenvalues_.resize(grid.size());
    for (std::size_t i = 0; i < mx.size(); ++i) {
      for (std::size_t j = 0; j < my.size(); ++j) eigenvalues_[i * my.size() + j] = mx[i] + my[j];
    }
    normalisation_ = 4.0 * (nx - 1) * (ny - 1);
    std::lock_guard lock(planner_mutex());
    plan_->handle = fftw_plan_r2r_2d(nx, ny, scratch_.data(), scratch_.data(), FFTW_REDFT00, FFTW_REDFT00, flags);
  }
  if (plan_->handle == nullptr) throw DomainError("NeumannHeatPropagator: FFTW planning failed");
}

NeumannHeatPropagator::~NeumannHeatPropagator() = default;
NeumannHeatPropagator::NeumannHeatPropagator(NeumannHeatPropagator&&) noexcept = default;
NeumannHeatPropagator& NeumannHeatPropagator::operator=(NeumannHeatPropagator&&) noexcept = default;

std::vector<double> NeumannHeatPropagator::multipliers(double diffusivity, double tau) const {
  std::vector<double> f(eigenvalues_.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(-diffusivity * eigenvalues_[i] * tau) / normalisation_;
  return f;
}

void NeumannHeatPropagator::apply(std::span<const double> in, std::span<double> out, std::span<const double> factors) {
  if (in.size() != scratch_.size() || out.size() != scratch_.size() || factors.size() != scratch_.size()) {
    throw DomainError("NeumannHeatPropagator: size mismatch");
  }
  std::copy(in.begin(), in.end(), scratch_.begin());
  fftw_execute_r2r(plan_->handle, scratch_.data(), scratch_.data());
  for (std::size_t i = 0; i < scratch_.size(); ++i) scratch_[i] *= factors[i];
  fftw_execute_r2r(plan_->handle, scratch_.data(), scratch_.data());
  std::copy(scratch_.begin(), scratch_.end(), out.begin());
}

}  // namespace cscdyn
