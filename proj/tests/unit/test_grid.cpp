#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cscdyn/errors.hpp"
#include "cscdyn/grid.hpp"
#include "oracles.hpp"

using namespace cscdyn;
using std::numbers::pi;

namespace {

std::vector<double> random_field(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> f(n);
  for (auto& x : f) x = g(rng);
  return f;
}

double weighted_dot(const Grid& grid, const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  return integrate_field(grid, prod);
}

}  // namespace

TEST_CASE("grid construction") {
  const Grid g1(DomainSpec::interval(1.0, 11));
  CHECK(g1.spacing(0) == doctest::Approx(0.1).epsilon(1e-15));
  double sum = 0;
  for (double w : g1.weights()) {
    CHECK(w > 0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

  const Grid g2 = build_grid(DomainSpec::box(pi, pi, 33, 33));
  sum = 0;
  for (double w : g2.weights()) sum += w;
  CHECK(std::abs(sum - pi * pi) / (pi * pi) < 1e-12);
  CHECK(g2.size() == 33 * 33);
  const auto pos = g2.position(2 * 33 + 5);
  CHECK(pos[0] == doctest::Approx(2 * pi / 32));
  CHECK(pos[1] == doctest::Approx(5 * pi / 32));

  CHECK_THROWS_AS(Grid(DomainSpec::interval(1.0, 2)), DomainError);
  CHECK_THROWS_AS(Grid(DomainSpec::interval(0.0, 11)), DomainError);
  CHECK_THROWS_AS(Grid(DomainSpec::box(1.0, -1.0, 5, 5)), DomainError);
}

TEST_CASE("laplacian annihilates constants and conserves") {
  for (const auto& dom : {DomainSpec::interval(2.0, 17), DomainSpec::box(1.0, 2.0, 9, 13)}) {
    const Grid g(dom);
    const auto lc = neumann_laplacian_apply(g, std::vector<double>(g.size(), 3.5));
    for (double x : lc) CHECK(std::abs(x) < 1e-10);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t) {
      const auto f = random_field(g.size(), rng);
      CHECK(std::abs(integrate_field(g, neumann_laplacian_apply(g, f))) < 1e-12 * g.size() / g.min_spacing() /
                                                                              g.min_spacing() * g.measure());
    }
  }
}

TEST_CASE("laplacian matches the dense stencil") {
  for (const auto& dom : {DomainSpec::interval(1.0, 33), DomainSpec::box(1.0, 0.5, 7, 9)}) {
    const Grid g(dom);
    const Eigen::MatrixXd l = oracle::laplacian_matrix(g);
    std::mt19937_64 rng(3);
    const auto f = random_field(g.size(), rng);
    const auto out = neumann_laplacian_apply(g, f);
    const Eigen::VectorXd ref = l * Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(out[i] == doctest::Approx(ref(static_cast<Eigen::Index>(i))).epsilon(1e-12));
  }
}

TEST_CASE("weighted symmetry and semidefiniteness") {
  const Grid g(DomainSpec::interval(1.0, 41));
  const Grid g2(DomainSpec::box(1.0, 1.0, 11, 15));
  for (const Grid* grid : {&g, &g2}) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
      const auto f = random_field(grid->size(), rng);
      const auto h = random_field(grid->size(), rng);
      const double a = weighted_dot(*grid, neumann_laplacian_apply(*grid, f), h);
      const double b = weighted_dot(*grid, f, neumann_laplacian_apply(*grid, h));
      CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
      CHECK(weighted_dot(*grid, neumann_laplacian_apply(*grid, f), f) <= 1e-12);
    }
  }
}

TEST_CASE("cosines are discrete eigenvectors") {
  const Grid g(DomainSpec::interval(2.0, 33));
  const double h = g.spacing(0);
  for (int j = 0; j < 6; ++j) {
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::cos(j * pi * g.coordinate(0, i) / 2.0);
    const auto lf = neumann_laplacian_apply(g, f);
    const double lam = -(2.0 / (h * h)) * (1.0 - std::cos(j * pi * h / 2.0));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(lf[i] - lam * f[i]) < 1e-9);
  }
  SUBCASE("dense eigendecomposition") {
    const auto ev = oracle::spectrum(oracle::laplacian_matrix(g));
    std::vector<double> dense;
    for (auto z : ev) dense.push_back(-z.real());
    std::sort(dense.begin(), dense.end());
    const auto disc = discrete_neumann_eigenvalues(g, g.size());
    REQUIRE(disc.size() == dense.size());
    for (std::size_t j = 0; j < disc.size(); ++j) CHECK(std::abs(disc[j] - dense[j]) < 1e-8 * std::max(1.0, dense[j]));
  }
}

TEST_CASE("quadrature") {
  const Grid g(DomainSpec::interval(1.0, 101));
  CHECK(integrate_field(g, std::vector<double>(g.size(), 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  std::vector<double> x(g.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = g.coordinate(0, i);
  CHECK(std::abs(integrate_field(g, x) - 0.5) < 1e-12);
  auto err = [](std::size_t n) {
    const Grid gg(DomainSpec::interval(1.0, n));
    std::vector<double> f(gg.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(gg.coordinate(0, i), 2);
    return std::abs(integrate_field(gg, f) - 1.0 / 3.0);
  };
  CHECK(err(21) / err(41) == doctest::Approx(4.0).epsilon(0.05));
  CHECK_THROWS_AS((void)integrate_field(g, std::vector<double>(5, 1.0)), DomainError);
  CHECK_THROWS_AS((void)neumann_laplacian_apply(g, std::vector<double>(5, 1.0)), DomainError);
}

TEST_CASE("analytic Neumann eigenvalues") {
  CHECK(neumann_eigenvalues(DomainSpec::interval(pi, 11), 2)[1] == doctest::Approx(1.0));
  CHECK(neumann_eigenvalues(DomainSpec::interval(1.0, 11), 2)[1] == doctest::Approx(pi * pi));
  const auto sq = neumann_eigenvalues(DomainSpec::box(pi, pi, 11, 11), 4);
  REQUIRE(sq.size() == 4);
  CHECK(sq[0] == doctest::Approx(0.0));
  CHECK(sq[1] == doctest::Approx(1.0));
  CHECK(sq[2] == doctest::Approx(1.0));
  CHECK(sq[3] == doctest::Approx(2.0));
  DomainSpec bad = DomainSpec::interval(1.0, 11);
  bad.dimension = 3;
  CHECK_THROWS_AS((void)neumann_eigenvalues(bad, 3), NotImplementedError);
}

TEST_CASE("discrete eigenvalues converge at second order") {
  const double length = 1.0;
  for (std::size_t j = 1; j <= 3; ++j) {
    auto err = [&](std::size_t n) {
      const Grid g(DomainSpec::interval(length, n));
      return std::abs(discrete_neumann_eigenvalues(g, j + 1)[j] - std::pow(j * pi / length, 2));
    };
    CHECK(err(33) / err(65) == doctest::Approx(4.0).epsilon(0.1));
  }
}
