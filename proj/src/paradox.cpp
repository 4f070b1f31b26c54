#include "cscdyn/paradox.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>

#include "cscdyn/errors.hpp"
#include "cscdyn/slow_manifold.hpp"

namespace cscdyn {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Paradox: return "paradox";
    case Verdict::NoMatch: return "no-match";
    case Verdict::Refuted: return "refuted";
    case Verdict::Ambiguous: return "ambiguous";
  }
  return "?";
}

void MassSeries::push(double time, double m, double r, double res) {
  if (!t.empty() && !(time > t.back())) throw DomainError("mass series: times must be strictly increasing");
  t.push_back(time);
  mass.push_back(m);
  rate.push_back(r);
  residual.push_back(res);
}

namespace {

struct Bracket {
  std::size_t i0;
  double h;
  double s;
};

Bracket locate(const std::vector<double>& t, double time) {
  if (t.size() < 2) throw DomainError("mass series: need at least two samples");
  if (time < t.front() || time > t.back()) throw DomainError("mass series: time outside sampled range");
  auto it = std::upper_bound(t.begin(), t.end(), time);
  std::size_t i1 = std::min(static_cast<std::size_t>(it - t.begin()), t.size() - 1);
  const std::size_t i0 = i1 - 1;
  const double h = t[i1] - t[i0];
  return {i0, h, (time - t[i0]) / h};
}

}  // namespace

double MassSeries::mass_at(double time) const {
  const auto [i0, h, s] = locate(t, time);
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * mass[i0] + (s3 - 2 * s2 + s) * h * rate[i0] + (-2 * s3 + 3 * s2) * mass[i0 + 1] +
         (s3 - s2) * h * rate[i0 + 1];
}

double MassSeries::rate_at(double time) const {
  const auto [i0, h, s] = locate(t, time);
  const double s2 = s * s;
  return (6 * s2 - 6 * s) / h * mass[i0] + (3 * s2 - 4 * s + 1) * rate[i0] + (-6 * s2 + 6 * s) / h * mass[i0 + 1] +
         (3 * s2 - 2 * s) * rate[i0 + 1];
}

namespace {

// First time the residual magnitude falls below tol; log-linear between samples.
std::optional<double> settle_time(const MassSeries& run, double tol) {
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    const double r = std::abs(run.residual[i]);
    if (r >= tol) continue;
    if (i == 0) return run.t[0];
    const double r0 = std::abs(run.residual[i - 1]);
    if (r <= 0.0) return run.t[i];
    const double frac = std::clamp(std::log(r0 / tol) / std::log(r0 / r), 0.0, 1.0);
    return run.t[i - 1] + frac * (run.t[i] - run.t[i - 1]);
  }
  return std::nullopt;
}

// First time >= from at which the run reaches `level`.
std::optional<double> first_crossing(const MassSeries& run, double from, double level) {
  if (run.mass_at(from) >= level) return from;
  auto it = std::upper_bound(run.t.begin(), run.t.end(), from);
  double lo = from;
  for (std::size_t j = static_cast<std::size_t>(it - run.t.begin()); j < run.t.size(); ++j) {
    if (run.mass[j] >= level) {
      double a = lo, b = run.t[j];
      for (int iter = 0; iter < 200 && b - a > 1e-13 * std::max(1.0, b); ++iter) {
        const double mid = 0.5 * (a + b);
        (run.mass_at(mid) >= level ? b : a) = mid;
      }
      return b;
    }
    lo = run.t[j];
  }
  return std::nullopt;
}

}  // namespace

ParadoxReport compare_mass_series(const MassSeries& run_1, const MassSeries& run_2, double alpha_1, double alpha_2,
                                  const ParadoxOptions& options) {
  ParadoxReport report;
  report.alpha_1 = alpha_1;
  report.alpha_2 = alpha_2;
  report.verdict = Verdict::NoMatch;

  const double horizon = std::min({options.horizon, run_1.end_time(), run_2.end_time()});
  const auto s1 = settle_time(run_1, options.settle_tolerance);
  const auto s2 = settle_time(run_2, options.settle_tolerance);
  if (!s1 || !s2) {
    report.note = "a run never settled onto the slow manifold within the horizon";
    return report;
  }
  report.settle_time_1 = *s1;
  report.settle_time_2 = *s2;

  const double level = std::max(run_1.mass_at(*s1), run_2.mass_at(*s2));
  const auto ta = first_crossing(run_1, *s1, level);
  const auto tb = first_crossing(run_2, *s2, level);
  report.matched_mass = level;
  if (!ta || !tb) {
    report.note = "total masses never become equal after settling";
    return report;
  }
  report.t_a = *ta;
  report.t_b = *tb;

  const double window = horizon - std::max(*ta, *tb);
  if (!(window > 0.0)) {
    report.note = "match found at the end of the horizon; no room for theta samples";
    return report;
  }

  std::vector<double> thetas = options.theta_grid;
  if (thetas.empty()) {
    const std::size_t n = std::max<std::size_t>(options.theta_points, 2);
    const double lg = std::log10(options.theta_min_fraction);
    for (std::size_t k = 0; k < n; ++k) {
      thetas.push_back(window * std::pow(10.0, lg * (1.0 - static_cast<double>(k) / static_cast<double>(n - 1))));
    }
    thetas.back() = window;
  }
  std::sort(thetas.begin(), thetas.end());

  bool ordered_prefix = true;
  bool any_reversal = false;
  report.min_gap = std::numeric_limits<double>::infinity();
  for (double theta : thetas) {
    if (!(theta > 0.0) || theta > window) continue;
    const double gap = run_1.mass_at(*ta + theta) - run_2.mass_at(*tb + theta);
    ++report.theta_samples;
    report.min_gap = std::min(report.min_gap, gap);
    const bool ok = gap > options.strict_margin;
    if (ok) ++report.theta_satisfied;
    if (gap < -options.refute_margin) any_reversal = true;
    if (ok && ordered_prefix) {
      report.theta_window = theta;
    } else {
      ordered_prefix = false;
    }
  }

  if (report.theta_samples == 0) {
    report.note = "no theta sample inside the window";
    return report;
  }
  const bool rising = run_1.rate_at(*ta) > 0.0 && run_2.rate_at(*tb) > 0.0;
  if (any_reversal) {
    report.verdict = Verdict::Refuted;
  } else if (report.theta_satisfied == report.theta_samples && rising) {
    report.verdict = Verdict::Paradox;
  } else {
    report.verdict = Verdict::Ambiguous;
    report.note = rising ? "ordering not strict at solver precision" : "mass not increasing at the matching time";
  }
  return report;
}

MassSeries mass_series(const OdeTrajectory& trajectory, const ModelParams& params) {
  MassSeries series;
  const auto& t = trajectory.times();
  const auto& s = trajectory.states();
  const auto& r = trajectory.rates();
  for (std::size_t i = 0; i < t.size(); ++i) {
    series.push(t[i], s[i].p_bar(), r[i].u_bar + r[i].v_bar, slow_manifold_residual(params, s[i]));
  }
  return series;
}

namespace {

void require_ordering(double alpha_1, double alpha_2) {
  if (!(alpha_2 > 0.0) || alpha_1 < alpha_2) {
    throw PreconditionError("paradox check: requires alpha_1 >= alpha_2 > 0");
  }
}

}  // namespace

OdeParadoxRun run_paradox_ode(const ModelParams& params_1, const ModelParams& params_2, const MeanState& init,
                              const ParadoxOptions& options, const OdeOptions& ode_options) {
  require_ordering(params_1.alpha, params_2.alpha);
  OdeOptions opt = ode_options;
  if (options.sample_spacing > 0.0) opt.adaptive.max_step = std::min(opt.adaptive.max_step, options.sample_spacing);
  auto second =
      std::async(std::launch::async, [&] { return integrate_ode(params_2, init, 0.0, options.horizon, opt); });
  OdeParadoxRun out;
  out.run_1 = integrate_ode(params_1, init, 0.0, options.horizon, opt);
  out.run_2 = second.get();
  out.report = compare_mass_series(mass_series(out.run_1, params_1), mass_series(out.run_2, params_2),
                                   params_1.alpha, params_2.alpha, options);
  return out;
}

ParadoxReport paradox_check_ode(const ModelParams& params_1, const ModelParams& params_2, const MeanState& init,
                                const ParadoxOptions& options, const OdeOptions& ode_options) {
  return run_paradox_ode(params_1, params_2, init, options, ode_options).report;
}

}  // namespace cscdyn
