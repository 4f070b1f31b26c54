#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cscdyn/ode.hpp"

namespace cscdyn {

enum class Verdict { Paradox, NoMatch, Refuted, Ambiguous };

[[nodiscard]] std::string to_string(Verdict v);

/// Total-mass time series of one run: samples of p(t), dp/dt and the
/// slow-manifold residual of the mean state. Mass is interpolated with
/// cubic Hermite polynomials built from (mass, rate).
struct MassSeries {
  std::vector<double> t;
  std::vector<double> mass;
  std::vector<double> rate;
  std::vector<double> residual;

  void push(double time, double m, double r, double res);
  [[nodiscard]] bool empty() const noexcept { return t.empty(); }
  [[nodiscard]] double end_time() const { return t.back(); }
  [[nodiscard]] double mass_at(double time) const;
  [[nodiscard]] double rate_at(double time) const;
};

struct ParadoxOptions {
  double horizon = 2000.0;
  std::size_t theta_points = 64;
  double theta_min_fraction = 1e-3;   ///< smallest theta as a fraction of the window
  std::vector<double> theta_grid;     ///< explicit theta samples; overrides the log-spaced default
  double settle_tolerance = 1e-4;     ///< |M| below which a run counts as settled on the slow manifold
  double strict_margin = 1e-10;       ///< p1 - p2 must exceed this for the ordering to count
  double refute_margin = 1e-8;        ///< p1 < p2 - refute_margin is a strict reversal
  /// Largest spacing of the mass samples of an ODE run (caps the integrator
  /// step). The settle time is interpolated between samples, and the
  /// residual levels off near the threshold, so coarse samples shift it.
  double sample_spacing = 0.05;
};

/// Outcome of a growth-paradox test between a run with the larger death
/// rate alpha_1 and one with the smaller alpha_2.
///
/// verdict == Paradox means p1(t_a + theta) > p2(t_b + theta) + strict_margin
/// at every sampled theta in (0, theta_window].
struct ParadoxReport {
  double alpha_1 = 0.0;
  double alpha_2 = 0.0;
  double t_a = 0.0;
  double t_b = 0.0;
  double matched_mass = 0.0;
  double theta_window = 0.0;
  Verdict verdict = Verdict::NoMatch;
  double settle_time_1 = 0.0;
  double settle_time_2 = 0.0;
  std::size_t theta_samples = 0;
  std::size_t theta_satisfied = 0;
  double min_gap = 0.0;  ///< smallest p1(t_a + theta) - p2(t_b + theta) over the samples
  std::string note;
};

/// Matching step shared by the ODE and PDE detectors.
///
/// Each run's settle time is the first time its |M| drops below
/// settle_tolerance. The matched mass is the larger of the two masses at
/// the settle times; t_a, t_b are the first times after settling at which
/// each run reaches it. Ordering is then checked on the theta grid, by
/// default theta_points log-spaced values in W * [theta_min_fraction, 1]
/// with W = horizon - max(t_a, t_b).
[[nodiscard]] ParadoxReport compare_mass_series(const MassSeries& run_1, const MassSeries& run_2, double alpha_1,
                                                double alpha_2, const ParadoxOptions& options);

/// Mass series at the accepted steps of an ODE trajectory (|Omega| = 1).
[[nodiscard]] MassSeries mass_series(const OdeTrajectory& trajectory, const ModelParams& params);

struct OdeParadoxRun {
  ParadoxReport report;
  OdeTrajectory run_1;
  OdeTrajectory run_2;
};

/// Integrates both reductions from the same initial state on [0, horizon] and
/// compares them. Requires alpha_1 >= alpha_2 > 0 (equality is the symmetric
/// control case and can never yield a paradox).
[[nodiscard]] OdeParadoxRun run_paradox_ode(const ModelParams& params_1, const ModelParams& params_2,
                                            const MeanState& init, const ParadoxOptions& options,
                                            const OdeOptions& ode_options = {});

[[nodiscard]] ParadoxReport paradox_check_ode(const ModelParams& params_1, const ModelParams& params_2,
                                              const MeanState& init, const ParadoxOptions& options,
                                              const OdeOptions& ode_options = {});

}  // namespace cscdyn
