#include <doctest.h>

#include <cmath>
#include <random>

#include "cscdyn/errors.hpp"
#include "cscdyn/paradox.hpp"
#include "cscdyn/slow_manifold.hpp"

using namespace cscdyn;

namespace {

ModelParams with(double alpha, double delta = 0.01) {
  ModelParams p;
  p.alpha = alpha;
  p.delta = delta;
  p.kernel = KernelSpec(1.0);
  return p;
}

MassSeries synthetic(double offset, double slope, double t_end = 100.0) {
  MassSeries s;
  for (double t = 0.0; t <= t_end + 1e-12; t += 0.5) s.push(t, offset + slope * t, slope, 0.0);
  return s;
}

}  // namespace

TEST_CASE("reference scenario is a paradox") {
  const auto p1 = with(0.8), p2 = with(0.2);
  const auto init = on_manifold_state(p1, 0.5);
  const auto run = run_paradox_ode(p1, p2, init, {});
  const auto& r = run.report;
  CHECK(r.verdict == Verdict::Paradox);
  CHECK(r.theta_samples == 64);
  CHECK(r.theta_satisfied == 64);
  CHECK(r.t_a > r.t_b);
  CHECK(r.matched_mass > 0.0);
  CHECK(r.matched_mass < 1.0);
  CHECK(r.theta_window == doctest::Approx(2000.0 - std::max(r.t_a, r.t_b)));

  SUBCASE("a tighter reference integration confirms every sampled ordering") {
    OdeOptions tight;
    tight.adaptive.atol = 1e-13;
    tight.adaptive.rtol = 1e-11;
    const auto ref = run_paradox_ode(p1, p2, init, {}, tight);
    CHECK(ref.report.verdict == Verdict::Paradox);
    CHECK(std::abs(ref.report.matched_mass - r.matched_mass) < 1e-6);
    const double window = 2000.0 - std::max(r.t_a, r.t_b);
    for (int k = 0; k < 64; ++k) {
      const double theta = window * std::pow(10.0, -3.0 * (1.0 - k / 63.0));
      CHECK(ref.run_1.mass_at(r.t_a + theta) > ref.run_2.mass_at(r.t_b + theta));
    }
  }
  SUBCASE("faster growth at the matched mass") {
    const auto s1 = run.run_1.state_at(r.t_a);
    const auto s2 = run.run_2.state_at(r.t_b);
    const auto d1 = ode_rhs(p1, s1), d2 = ode_rhs(p2, s2);
    CHECK(d1.u_bar + d1.v_bar > d2.u_bar + d2.v_bar);
  }
}

TEST_CASE("equal death rates never give a paradox") {
  const auto p = with(0.5);
  const auto r = paradox_check_ode(p, p, on_manifold_state(p, 0.6), {});
  CHECK(r.verdict != Verdict::Paradox);
  CHECK(r.verdict == Verdict::Ambiguous);
}

TEST_CASE("ordering property over random rate pairs") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ParadoxOptions opt;
  opt.horizon = 1500.0;
  int matched = 0;
  for (int trial = 0; trial < 20; ++trial) {
    double a1 = 0.05 + 0.9 * unit(rng), a2 = 0.05 + 0.9 * unit(rng);
    if (a1 < a2) std::swap(a1, a2);
    if (a1 == a2) continue;
    const auto p1 = with(a1), p2 = with(a2);
    const double p_lo = 1.0 - a1;
    const auto init = on_manifold_state(p1, p_lo + (1.0 - p_lo) * (0.2 + 0.6 * unit(rng)));
    const auto r = paradox_check_ode(p1, p2, init, opt);
    INFO("alpha_1 = " << a1 << ", alpha_2 = " << a2 << ", note: " << r.note);
    if (r.verdict == Verdict::NoMatch) continue;
    ++matched;
    if (r.matched_mass > 0.0 && r.matched_mass < 1.0) CHECK(r.verdict == Verdict::Paradox);
  }
  CHECK(matched == 20);
}

TEST_CASE("comparison on synthetic series") {
  ParadoxOptions opt;
  opt.horizon = 100.0;
  SUBCASE("lower curve is refuted") {
    const auto r = compare_mass_series(synthetic(0.1, 0.001), synthetic(0.1, 0.002), 0.8, 0.2, opt);
    CHECK(r.verdict == Verdict::Refuted);
  }
  SUBCASE("masses never meet") {
    const auto r = compare_mass_series(synthetic(0.1, 0.0), synthetic(0.5, 0.0), 0.8, 0.2, opt);
    CHECK(r.verdict == Verdict::NoMatch);
  }
  SUBCASE("identical series are ambiguous") {
    const auto r = compare_mass_series(synthetic(0.1, 0.001), synthetic(0.1, 0.001), 0.8, 0.2, opt);
    CHECK(r.verdict == Verdict::Ambiguous);
  }
  SUBCASE("faster series is a paradox") {
    const auto r = compare_mass_series(synthetic(0.1, 0.002), synthetic(0.1, 0.001), 0.8, 0.2, opt);
    CHECK(r.verdict == Verdict::Paradox);
    CHECK(r.t_a == doctest::Approx(0.0));
  }
  SUBCASE("unsettled runs do not match") {
    MassSeries s;
    for (double t = 0.0; t <= 100.0; t += 1.0) s.push(t, 0.1, 0.0, 1.0);
    CHECK(compare_mass_series(s, s, 0.8, 0.2, opt).verdict == Verdict::NoMatch);
  }
  SUBCASE("hermite interpolation is exact on cubics") {
    MassSeries s;
    for (double t = 0.0; t <= 4.0; t += 1.0) s.push(t, t * t * t, 3 * t * t, 0.0);
    CHECK(s.mass_at(2.5) == doctest::Approx(15.625));
    CHECK(s.rate_at(2.5) == doctest::Approx(18.75));
  }
}

TEST_CASE("paradox preconditions") {
  const auto init = MeanState{0.2, 0.3};
  CHECK_THROWS_AS((void)paradox_check_ode(with(0.2), with(0.8), init, {}), PreconditionError);
  CHECK_THROWS_AS((void)paradox_check_ode(with(0.2), with(-0.1), init, {}), PreconditionError);
  MassSeries s;
  s.push(1.0, 0.1, 0.0, 0.0);
  CHECK_THROWS_AS(s.push(1.0, 0.1, 0.0, 0.0), DomainError);
}
