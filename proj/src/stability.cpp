#include "cscdyn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "cscdyn/errors.hpp"

namespace cscdyn {

namespace {

void require_mu(double mu) {
  if (!(mu >= 0.0)) throw PreconditionError("mode eigenvalues: mu must be >= 0");
}

void require_on_manifold(const ModelParams& params, const MeanState& point, double omega) {
  const double m = slow_manifold_residual(params, point, omega);
  if (!(std::abs(m) < kManifoldTolerance)) {
    throw PreconditionError("mode_eigenvalues: point is off the slow manifold (|M| = " + std::to_string(std::abs(m)) +
                            ")");
  }
}

}  // namespace

ModeEigenvalues mode_eigenvalues(const ModelParams& params, const MeanState& point, double mu, double omega_measure) {
  require_mu(mu);
  require_on_manifold(params, point, omega_measure);
  const double p = point.p_bar();
  const double kp = params.kernel.derivative(p);
  const double k = params.kernel(p);
  return {-mu * params.d, omega_measure * kp * p - mu + omega_measure * k - params.alpha};
}

double lambda_2_substituted(const ModelParams& params, const MeanState& point, double mu, double omega_measure) {
  require_mu(mu);
  require_on_manifold(params, point, omega_measure);
  const double p = point.p_bar();
  const double kp = params.kernel.derivative(p);
  const double k = params.kernel(p);
  double tail = 0.0;
  if (point.v_bar > 0.0) {
    tail = omega_measure * k * point.u_bar / point.v_bar;
  } else if (p > 0.0) {
    // limit along the curve, where |Omega| k u / v = alpha u / p
    tail = params.alpha * point.u_bar / p;
  } else {
    throw PreconditionError("lambda_2_substituted: u/v has no limit at the origin");
  }
  return omega_measure * kp * p - mu - tail;
}

ModeEigenvalues nonlocal_mode_eigenvalues(const ModelParams& params, const MeanState& point, double mu,
                                          double omega_measure) {
  require_mu(mu);
  const double p = point.p_bar();
  const double kp = params.kernel.derivative(p);
  if (mu == 0.0) return {0.0, omega_measure * (kp * p + params.kernel(p)) - params.alpha};
  return {-mu * params.d, omega_measure * kp * p - mu - params.alpha};
}

std::string to_string(PdeClassification c) {
  switch (c) {
    case PdeClassification::StableNode: return "stable node";
    case PdeClassification::Saddle: return "saddle";
    case PdeClassification::Degenerate: return "degenerate";
  }
  return "?";
}

StabilityReport classify_pde_equilibrium(const ModelParams& params, const Equilibrium& e, const DomainSpec& domain,
                                         std::size_t j_max, double tolerance) {
  if (!e.exists) throw PreconditionError("classify_pde_equilibrium: equilibrium " + to_string(e.label) + " does not exist");
  if (j_max < 1) throw PreconditionError("classify_pde_equilibrium: j_max >= 1");
  domain.validate();
  const double omega = domain.measure();
  const auto mu = neumann_eigenvalues(domain, j_max + 1);

  StabilityReport report;
  report.equilibrium = e;
  if (e.label == EquilibriumLabel::Extinction) {
    const double k0 = params.kernel(0.0);
    for (std::size_t j = 1; j <= j_max; ++j) {
      report.modes.push_back({j, mu[j], -mu[j] * params.d + k0, -mu[j] + k0 - params.alpha});
    }
    report.conditions = {{"-mu_1 d + k(0)", report.modes[0].lambda_1},
                         {"-mu_1 + k(0) - alpha", report.modes[0].lambda_2}};
  } else {
    if (e.label == EquilibriumLabel::PureCC) {
      // Constant steady state of the non-local system: k(v) |Omega| = alpha.
      report.equilibrium.point = {0.0, slow_manifold_start(params, omega)};
    }
    for (std::size_t j = 1; j <= j_max; ++j) {
      const auto ev = nonlocal_mode_eigenvalues(params, report.equilibrium.point, mu[j], omega);
      report.modes.push_back({j, mu[j], ev.lambda_1, ev.lambda_2});
    }
    double max_1 = -std::numeric_limits<double>::infinity();
    double max_2 = max_1;
    for (const auto& row : report.modes) {
      max_1 = std::max(max_1, row.lambda_1);
      max_2 = std::max(max_2, row.lambda_2);
    }
    report.conditions = {{"max_j lambda_1", max_1}, {"max_j lambda_2", max_2}};
  }

  bool degenerate = false;
  bool stable = true;
  for (const auto& c : report.conditions) {
    if (std::abs(c.value) < tolerance) degenerate = true;
    if (!(c.value < 0.0)) stable = false;
  }
  report.classification =
      degenerate ? PdeClassification::Degenerate : (stable ? PdeClassification::StableNode : PdeClassification::Saddle);
  return report;
}

MarginReport normal_hyperbolicity_margin(const ModelParams& params, const SlowManifoldCurve& curve,
                                         const DomainSpec& domain, const MarginOptions& options) {
  if (options.j_max < 1) throw PreconditionError("normal_hyperbolicity_margin: j_max >= 1");
  if (curve.samples.empty()) throw PreconditionError("normal_hyperbolicity_margin: empty curve");
  const double omega = domain.measure();
  if (std::abs(omega - curve.omega_measure) > 1e-12 * std::max(1.0, omega)) {
    throw PreconditionError("normal_hyperbolicity_margin: curve was built for a different |Omega|");
  }
  const auto mu = options.grid != nullptr ? discrete_neumann_eigenvalues(*options.grid, options.j_max + 1)
                                          : neumann_eigenvalues(domain, options.j_max + 1);
  const ModelParams p = params.with_alpha(curve.alpha);

  MarginReport out;
  out.infimum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const MeanState& s = curve.samples[i];
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= options.j_max; ++j) {
      const auto ev = options.form == ModeForm::Uniform ? mode_eigenvalues(p, s, mu[j], omega)
                                                        : nonlocal_mode_eigenvalues(p, s, mu[j], omega);
      margin = std::min(margin, -std::max(ev.lambda_1, ev.lambda_2));
    }
    out.margins.push_back(margin);
    if (margin < out.infimum) {
      out.infimum = margin;
      out.arg_infimum = i;
      out.location = s;
    }
  }
  out.hyperbolic = out.infimum > 0.0;
  return out;
}

DistanceSeries mean_distance_history(const FieldTrajectory& trajectory, const Grid& grid,
                                     const SlowManifoldCurve& curve, double from) {
  DistanceSeries out;
  const double omega = grid.measure();
  for (std::size_t i = 0; i < trajectory.record_times.size(); ++i) {
    if (trajectory.record_times[i] < from) continue;
    const MeanState mean = (1.0 / omega) * trajectory.record_integrals[i];
    out.t.push_back(trajectory.record_times[i]);
    out.distance.push_back(distance_to_curve(curve, mean));
  }
  return out;
}

std::vector<ScalingRow> manifold_distance_scaling(const ModelParams& params, const std::vector<double>& deltas,
                                                  const Grid& grid, const FieldState& init,
                                                  const ScalingOptions& options) {
  if (deltas.empty()) throw PreconditionError("manifold_distance_scaling: empty delta list");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw PreconditionError("manifold_distance_scaling: delta > 0");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) {
      throw PreconditionError("manifold_distance_scaling: delta list must be strictly decreasing");
    }
  }
  if (!(options.horizon > options.settle_time)) {
    throw PreconditionError("manifold_distance_scaling: horizon must exceed settle_time");
  }
  const auto curve =
      slow_manifold_curve(params, linspace(0.0, 1.0, options.curve_points), CurveMethod::RootFind, grid.measure());

  auto measure = [&](double delta) {
    PdeOptions pde = options.pde;
    pde.keep_fields = false;
    const auto traj = integrate_pde(params.with_delta(delta), grid, init, 0.0, options.horizon, pde);
    const auto hist = mean_distance_history(traj, grid, curve, options.settle_time);
    ScalingRow row{delta, 0.0, options.settle_time};
    for (std::size_t i = 0; i < hist.t.size(); ++i) {
      if (hist.distance[i] > row.sup_distance) {
        row.sup_distance = hist.distance[i];
        row.at_time = hist.t[i];
      }
    }
    return row;
  };

  std::vector<std::future<ScalingRow>> jobs;
  for (double delta : deltas) jobs.push_back(std::async(std::launch::async, measure, delta));
  std::vector<ScalingRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

}  // namespace cscdyn
