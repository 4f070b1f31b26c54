#include <doctest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "cscdyn/errors.hpp"
#include "cscdyn/ode.hpp"
#include "cscdyn/slow_manifold.hpp"
#include "oracles.hpp"

using namespace cscdyn;

namespace {

ModelParams base(double alpha = 0.5, double delta = 0.1, double sigma = 1.0) {
  ModelParams p;
  p.alpha = alpha;
  p.delta = delta;
  p.kernel = KernelSpec(sigma);
  return p;
}

Eigen::Matrix2d fd_jacobian(const ModelParams& p, const MeanState& s, double h) {
  Eigen::Matrix2d j;
  for (int c = 0; c < 2; ++c) {
    MeanState a = s, b = s;
    (c == 0 ? a.u_bar : a.v_bar) += h;
    (c == 0 ? b.u_bar : b.v_bar) -= h;
    const MeanState fa = ode_rhs(p, a), fb = ode_rhs(p, b);
    j(0, c) = (fa.u_bar - fb.u_bar) / (2 * h);
    j(1, c) = (fa.v_bar - fb.v_bar) / (2 * h);
  }
  return j;
}

}  // namespace

TEST_CASE("ode right-hand side") {
  const auto p = base();
  const auto at_p2 = ode_rhs(p, {1.0, 0.0});
  CHECK(at_p2.u_bar == 0.0);
  CHECK(at_p2.v_bar == 0.0);
  const auto at_p1 = ode_rhs(p, {0.0, 0.5});
  CHECK(std::abs(at_p1.u_bar) < 1e-16);
  CHECK(std::abs(at_p1.v_bar) < 1e-16);

  using mp = boost::multiprecision::cpp_dec_float_50;
  const mp u("0.25"), v("0.25"), k = 1 - (u + v), dl("0.1"), al("0.5");
  const double ref_u = static_cast<double>(dl * k * u);
  const double ref_v = static_cast<double>((1 - dl) * k * u - al * v + k * v);
  const auto r = ode_rhs(p, {0.25, 0.25});
  CHECK(r.u_bar == doctest::Approx(0.0125).epsilon(1e-14));
  CHECK(r.v_bar == doctest::Approx(0.1125).epsilon(1e-14));
  CHECK(std::abs(r.u_bar - ref_u) < 1e-16);
  CHECK(std::abs(r.v_bar - ref_v) < 1e-16);

  CHECK_THROWS_AS((void)ode_rhs(p, {std::numeric_limits<double>::quiet_NaN(), 0.1}), DomainError);
}

TEST_CASE("equilibria") {
  const auto e = equilibria(base());
  REQUIRE(e.size() == 3);
  CHECK(e[0].point == MeanState{0.0, 0.0});
  CHECK(e[1].exists);
  const double root = oracle::bisect([](double v) { return (1 - v) - 0.5; }, 0.0, 1.0);
  CHECK(e[1].point.v_bar == doctest::Approx(root).epsilon(1e-12));
  CHECK(e[2].point == MeanState{1.0, 0.0});
  CHECK(equilibria(base(0.36, 0.1, 2.0))[1].point.v_bar == doctest::Approx(0.8).epsilon(1e-14));
  const auto absent = equilibria(base(1.5));
  CHECK_FALSE(absent[1].exists);
  CHECK(absent[0].exists);
  CHECK(absent[2].exists);
  for (const auto& eq : e) {
    const auto r = ode_rhs(base(), eq.point);
    CHECK(std::abs(r.u_bar) <= 1e-14);
    CHECK(std::abs(r.v_bar) <= 1e-14);
  }
}

TEST_CASE("jacobian") {
  const auto p = base();
  const auto j = ode_jacobian(p, {0.0, 0.0});
  CHECK(j[0][0] == doctest::Approx(0.1));
  CHECK(j[0][1] == doctest::Approx(0.0));
  CHECK(j[1][0] == doctest::Approx(0.9));
  CHECK(j[1][1] == doctest::Approx(0.5));
  const auto ev = eigenvalues(j);
  CHECK(ev.first.real() == doctest::Approx(0.5));
  CHECK(ev.second.real() == doctest::Approx(0.1));

  SUBCASE("finite differences at random interior points") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int tested = 0;
    while (tested < 50) {
      const double u = unit(rng), v = unit(rng);
      if (u + v > 0.95) continue;
      const double sigma = 1.0 + 3.0 * unit(rng);
      const auto prm = base(0.05 + 0.9 * unit(rng), unit(rng), sigma);
      const auto a = ode_jacobian(prm, {u, v});
      const auto f = fd_jacobian(prm, {u, v}, 1e-5);
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) CHECK(std::abs(a[r][c] - f(r, c)) < 1e-6);
      }
      ++tested;
    }
    const auto a = ode_jacobian(p, {0.3, 0.2});
    const auto f = fd_jacobian(p, {0.3, 0.2}, 1e-5);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) CHECK(std::abs(a[r][c] - f(r, c)) < 1e-6);
    }
  }
}

TEST_CASE("closed-form 2x2 eigenvalues match a dense solver") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    Matrix2 m{{{g(rng), g(rng)}, {g(rng), g(rng)}}};
    Eigen::Matrix2d e;
    e << m[0][0], m[0][1], m[1][0], m[1][1];
    const auto ref = oracle::spectrum(e);
    const auto got = eigenvalues(m);
    CHECK(std::abs(got.first.real() - ref[0].real()) < 1e-10);
    CHECK(std::abs(got.second.real() - ref[1].real()) < 1e-10);
  }
}

TEST_CASE("equilibrium classification") {
  const auto p = base();
  const auto e = equilibria(p);
  CHECK(classify_ode_equilibrium(p, e[0]).kind == Classification::UnstableNode);
  CHECK(classify_ode_equilibrium(p, e[1]).kind == Classification::Saddle);
  const auto k2 = classify_ode_equilibrium(p, e[2]).kind;
  CHECK((k2 == Classification::StableNode || k2 == Classification::StableSpiral));

  const auto hi = base(1.5);
  const auto ehi = equilibria(hi);
  CHECK(classify_ode_equilibrium(hi, ehi[0]).kind == Classification::Saddle);
  CHECK_THROWS_AS((void)classify_ode_equilibrium(hi, ehi[1]), PreconditionError);

  const auto edge = base(1.0);
  CHECK(classify_ode_equilibrium(edge, equilibria(edge)[0]).kind == Classification::Degenerate);

  SUBCASE("eigenvalues against a dense solver of the finite-difference Jacobian") {
    for (const auto& eq : e) {
      const auto got = classify_ode_equilibrium(p, eq);
      // P2 sits on the kink of k, P0 on the edge of the domain of k
      if (eq.label != EquilibriumLabel::PureCC) continue;
      const auto f = fd_jacobian(p, eq.point, 1e-6);
      const auto ref = oracle::spectrum(f);
      CHECK(std::abs(got.eigenvalues.first.real() - ref[0].real()) < 1e-8);
      CHECK(std::abs(got.eigenvalues.second.real() - ref[1].real()) < 1e-8);
    }
    const auto j2 = ode_jacobian(p, {1.0, 0.0});
    const double tr = j2[0][0] + j2[1][1];
    const double det = j2[0][0] * j2[1][1] - j2[0][1] * j2[1][0];
    CHECK(tr == doctest::Approx(-1.5));
    CHECK(det == doctest::Approx(0.1 * 1.0 * 0.5));
  }
}

TEST_CASE("ode integration") {
  const auto p = base();
  SUBCASE("fixed point stays put") {
    const auto traj = integrate_ode(p, {1.0, 0.0}, 0.0, 500.0);
    for (const auto& s : traj.states()) CHECK(s == MeanState{1.0, 0.0});
  }
  SUBCASE("long run reaches the CSC state") {
    const auto traj = integrate_ode(p, {0.4, 0.3}, 0.0, 2000.0);
    const auto f = traj.final_state();
    CHECK(std::hypot(f.u_bar - 1.0, f.v_bar) < 1e-3);
  }
  SUBCASE("fast system is stationary on the slow manifold") {
    const auto p0 = p.with_delta(0.0);
    const auto start = on_manifold_state(p0, 0.7);
    const auto r = ode_rhs(p0, start);
    CHECK(std::abs(r.u_bar) <= 1e-14);
    CHECK(std::abs(r.v_bar) <= 1e-14);
    const auto traj = integrate_ode(p0, start, 0.0, 100.0);
    CHECK(std::hypot(traj.final_state().u_bar - start.u_bar, traj.final_state().v_bar - start.v_bar) < 1e-9);
  }
  SUBCASE("agreement with a fine fixed-step reference") {
    const auto traj = integrate_ode(p, {0.2, 0.1}, 0.0, 40.0);
    const auto ref = oracle::rk4_mean(p, {0.2, 0.1}, 40.0, 1e-3);
    CHECK(std::abs(traj.final_state().u_bar - ref.u_bar) < 1e-7);
    CHECK(std::abs(traj.final_state().v_bar - ref.v_bar) < 1e-7);
    const auto mid = oracle::rk4_mean(p, {0.2, 0.1}, 13.0, 1e-3);
    CHECK(std::abs(traj.state_at(13.0).u_bar - mid.u_bar) < 1e-6);
    CHECK(std::abs(traj.state_at(13.0).v_bar - mid.v_bar) < 1e-6);
  }
  SUBCASE("invalid initial data") {
    CHECK_THROWS_AS((void)integrate_ode(p, {-0.5, 0.0}, 0.0, 10.0), DomainError);
    CHECK_THROWS_AS((void)integrate_ode(p, {std::nan(""), 0.0}, 0.0, 10.0), IntegrationError);
  }
}

TEST_CASE("triangle stays invariant over random draws") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int draw = 0; draw < 100; ++draw) {
    const auto prm = base(0.01 + 0.98 * unit(rng), 0.01 + 0.98 * unit(rng), 1.0 + 3.0 * unit(rng));
    double u = unit(rng), v = unit(rng);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    const auto traj = integrate_ode(prm, {u, v}, 0.0, 300.0);
    double worst = 0.0;
    for (const auto& s : traj.states()) worst = std::max(worst, triangle_violation(s));
    CHECK(worst <= 1e-8);
  }
}
