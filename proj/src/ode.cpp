#include "cscdyn/ode.hpp"

#include <algorithm>
#include <cmath>

#include "cscdyn/errors.hpp"

namespace cscdyn {

std::string to_string(EquilibriumLabel label) {
  switch (label) {
    case EquilibriumLabel::Extinction: return "P0";
    case EquilibriumLabel::PureCC: return "P1";
    case EquilibriumLabel::PureCSC: return "P2";
  }
  return "?";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::StableNode: return "stable node";
    case Classification::UnstableNode: return "unstable node";
    case Classification::Saddle: return "saddle";
    case Classification::StableSpiral: return "stable spiral";
    case Classification::UnstableSpiral: return "unstable spiral";
    case Classification::Degenerate: return "degenerate";
  }
  return "?";
}

Eigenpair2 eigenvalues(const Matrix2& m) {
  const double half_trace = 0.5 * (m[0][0] + m[1][1]);
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  // Discriminant written as a sum of squares where possible to limit cancellation.
  const double half_diff = 0.5 * (m[0][0] - m[1][1]);
  const double disc = half_diff * half_diff + m[0][1] * m[1][0];
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    const double big = half_trace >= 0.0 ? half_trace + root : half_trace - root;
    const double small = big != 0.0 ? det / big : half_trace - root;
    const double hi = std::max(big, small);
    const double lo = std::min(big, small);
    return {{hi, 0.0}, {lo, 0.0}};
  }
  const double im = std::sqrt(-disc);
  return {{half_trace, im}, {half_trace, -im}};
}

namespace {

inline void check_finite(const MeanState& s, const char* what) {
  if (!std::isfinite(s.u_bar) || !std::isfinite(s.v_bar)) {
    throw DomainError(std::string(what) + ": non-finite state");
  }
}

}  // namespace

MeanState ode_rhs(const ModelParams& params, const MeanState& s) {
  check_finite(s, "ode_rhs");
  const double k = params.kernel(s.p_bar());
  return {params.delta * k * s.u_bar,
          (1.0 - params.delta) * k * s.u_bar - params.alpha * s.v_bar + k * s.v_bar};
}

std::vector<Equilibrium> equilibria(const ModelParams& params) {
  std::vector<Equilibrium> out;
  out.push_back({EquilibriumLabel::Extinction, {0.0, 0.0}, true});
  Equilibrium pure_cc{EquilibriumLabel::PureCC, {0.0, 0.0}, false};
  try {
    pure_cc.point.v_bar = params.kernel.inverse(params.alpha);
    pure_cc.exists = true;
  } catch (const NoSolutionError&) {
    pure_cc.exists = false;
  }
  out.push_back(pure_cc);
  out.push_back({EquilibriumLabel::PureCSC, {1.0, 0.0}, true});
  return out;
}

Matrix2 ode_jacobian(const ModelParams& params, const MeanState& s) {
  check_finite(s, "ode_jacobian");
  const double p = s.p_bar();
  const double k = params.kernel(p);
  const double kp = params.kernel.derivative(p);
  const double dl = params.delta;
  const double u = s.u_bar;
  const double v = s.v_bar;
  Matrix2 j{};
  j[0][0] = dl * (kp * u + k);
  j[0][1] = dl * kp * u;
  j[1][0] = (1.0 - dl) * (kp * u + k) + kp * v;
  j[1][1] = (1.0 - dl) * kp * u - params.alpha + kp * v + k;
  return j;
}

OdeClassification classify_ode_equilibrium(const ModelParams& params, const Equilibrium& e, double tolerance) {
  if (!e.exists) {
    throw PreconditionError("classify_ode_equilibrium: " + to_string(e.label) + " does not exist for alpha = " +
                            std::to_string(params.alpha));
  }
  OdeClassification out;
  out.eigenvalues = eigenvalues(ode_jacobian(params, e.point));
  const double re1 = out.eigenvalues.first.real();
  const double re2 = out.eigenvalues.second.real();
  if (std::abs(re1) < tolerance || std::abs(re2) < tolerance) {
    out.kind = Classification::Degenerate;
  } else if (out.eigenvalues.first.imag() != 0.0) {
    out.kind = re1 < 0.0 ? Classification::StableSpiral : Classification::UnstableSpiral;
  } else if (re1 < 0.0 && re2 < 0.0) {
    out.kind = Classification::StableNode;
  } else if (re1 > 0.0 && re2 > 0.0) {
    out.kind = Classification::UnstableNode;
  } else {
    out.kind = Classification::Saddle;
  }
  return out;
}

void OdeTrajectory::append(double t, const MeanState& s, const MeanState& rate) {
  if (!times_.empty() && !(t > times_.back())) {
    throw DomainError("trajectory: times must be strictly increasing");
  }
  times_.push_back(t);
  states_.push_back(s);
  rates_.push_back(rate);
}

std::vector<double> OdeTrajectory::masses() const {
  std::vector<double> m(states_.size());
  std::transform(states_.begin(), states_.end(), m.begin(), [](const MeanState& s) { return s.p_bar(); });
  return m;
}

MeanState OdeTrajectory::state_at(double t) const {
  if (times_.empty()) throw DomainError("trajectory: empty");
  if (t < times_.front() || t > times_.back()) {
    throw DomainError("trajectory: t = " + std::to_string(t) + " outside [" + std::to_string(times_.front()) +
                      ", " + std::to_string(times_.back()) + "]");
  }
  if (times_.size() == 1) return states_.front();
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i1 = static_cast<std::size_t>(it - times_.begin());
  if (i1 >= times_.size()) i1 = times_.size() - 1;
  const std::size_t i0 = i1 - 1;
  const double h = times_[i1] - times_[i0];
  const double s = (t - times_[i0]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * states_[i0] + (h10 * h) * rates_[i0] + h01 * states_[i1] + (h11 * h) * rates_[i1];
}

OdeTrajectory integrate_ode(const ModelParams& params, const MeanState& init, double t0, double t1,
                            const OdeOptions& options) {
  if (!std::isfinite(init.u_bar) || !std::isfinite(init.v_bar)) {
    throw IntegrationError("integrate_ode: non-finite initial state", t0);
  }
  if (init.u_bar < 0.0 || init.v_bar < 0.0) {
    throw DomainError("integrate_ode: initial state must lie in the closed positive quadrant");
  }
  OdeTrajectory traj;
  auto rhs = [&](double, const numerics::Vec<2>& y) {
    const MeanState r = ode_rhs(params, {y[0], y[1]});
    return numerics::Vec<2>{r.u_bar, r.v_bar};
  };
  auto observe = [&](double t, const numerics::Vec<2>& y, const numerics::Vec<2>& dy) {
    traj.append(t, {y[0], y[1]}, {dy[0], dy[1]});
  };
  numerics::dopri5<2>(rhs, t0, numerics::Vec<2>{init.u_bar, init.v_bar}, t1, options.adaptive, {}, observe);
  return traj;
}

double triangle_violation(const MeanState& s) {
  return std::max({0.0, -s.u_bar, s.u_bar - 1.0, -s.v_bar, s.p_bar() - 1.0});
}

}  // namespace cscdyn
