#include "cscdyn/pde.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "cscdyn/cosine_transform.hpp"
#include "cscdyn/errors.hpp"

namespace cscdyn {

FieldState FieldState::constant(const Grid& grid, double u, double v) {
  return {std::vector<double>(grid.size(), u), std::vector<double>(grid.size(), v)};
}

namespace {

void check_field(const Grid& grid, const FieldState& s, const char* what) {
  if (s.u.size() != grid.size() || s.v.size() != grid.size()) {
    throw DomainError(std::string(what) + ": field size does not match the grid");
  }
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    if (!std::isfinite(s.u[i]) || !std::isfinite(s.v[i])) throw DomainError(std::string(what) + ": non-finite field");
  }
}

bool all_finite(const FieldState& s) {
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    if (!std::isfinite(s.u[i]) || !std::isfinite(s.v[i])) return false;
  }
  return true;
}

// Evaluates the production/death terms and, optionally, the diffusion terms
// into preallocated storage. The fast system is the delta = 0 instance of the
// same expressions, so both paths agree bit for bit.
class RhsEvaluator {
 public:
  RhsEvaluator(const ModelParams& params, const Grid& grid, bool fast)
      : params_(params), grid_(grid), delta_(fast ? 0.0 : params.delta), lap_(grid.size()) {}

  void reaction(const FieldState& s, FieldState& out) const {
    const double iu = integrate_field(grid_, s.u);
    const double iv = integrate_field(grid_, s.v);
    const double alpha = params_.alpha;
    const double dl = delta_;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      const double k = params_.kernel(s.u[i] + s.v[i]);
      out.u[i] = dl * k * iu;
      out.v[i] = (1.0 - dl) * k * iu - alpha * s.v[i] + k * iv;
    }
  }

  void full(const FieldState& s, FieldState& out) {
    reaction(s, out);
    neumann_laplacian_apply(grid_, s.u, lap_);
    const double d = params_.d;
    for (std::size_t i = 0; i < lap_.size(); ++i) out.u[i] += d * lap_[i];
    neumann_laplacian_apply(grid_, s.v, lap_);
    for (std::size_t i = 0; i < lap_.size(); ++i) out.v[i] += lap_[i];
  }

 private:
  const ModelParams& params_;
  const Grid& grid_;
  double delta_;
  std::vector<double> lap_;
};

FieldState evaluate(const ModelParams& params, const Grid& grid, const FieldState& s, bool fast, const char* what) {
  check_field(grid, s, what);
  FieldState out = FieldState::constant(grid, 0.0, 0.0);
  RhsEvaluator rhs(params, grid, fast);
  rhs.full(s, out);
  return out;
}

// y <- y + a x
void axpy(double a, const FieldState& x, FieldState& y) {
  for (std::size_t i = 0; i < y.u.size(); ++i) {
    y.u[i] += a * x.u[i];
    y.v[i] += a * x.v[i];
  }
}

// out <- y + a x
void add_scaled(const FieldState& y, double a, const FieldState& x, FieldState& out) {
  for (std::size_t i = 0; i < y.u.size(); ++i) {
    out.u[i] = y.u[i] + a * x.u[i];
    out.v[i] = y.v[i] + a * x.v[i];
  }
}

class ExplicitRk4 {
 public:
  ExplicitRk4(RhsEvaluator& rhs, const Grid& grid)
      : rhs_(rhs),
        k1_(FieldState::constant(grid, 0, 0)),
        k2_(k1_),
        k3_(k1_),
        k4_(k1_),
        tmp_(k1_) {}

  const FieldState& derivative(const FieldState& y) {
    rhs_.full(y, k1_);
    return k1_;
  }

  // Advances y by h; k1 must hold f(y).
  void step(FieldState& y, double h) {
    add_scaled(y, 0.5 * h, k1_, tmp_);
    rhs_.full(tmp_, k2_);
    add_scaled(y, 0.5 * h, k2_, tmp_);
    rhs_.full(tmp_, k3_);
    add_scaled(y, h, k3_, tmp_);
    rhs_.full(tmp_, k4_);
    const double c = h / 6.0;
    for (std::size_t i = 0; i < y.u.size(); ++i) {
      y.u[i] += c * (k1_.u[i] + 2.0 * (k2_.u[i] + k3_.u[i]) + k4_.u[i]);
      y.v[i] += c * (k1_.v[i] + 2.0 * (k2_.v[i] + k3_.v[i]) + k4_.v[i]);
    }
  }

 private:
  RhsEvaluator& rhs_;
  FieldState k1_, k2_, k3_, k4_, tmp_;
};

// Integrating-factor RK4: with E = exp(L h / 2),
//   y_{n+1} = E^2 y + h/6 (E^2 k1 + 2 E (k2 + k3) + k4).
class IntegratingFactorRk4 {
 public:
  IntegratingFactorRk4(RhsEvaluator& rhs, const Grid& grid, double diffusivity)
      : rhs_(rhs),
        propagator_(grid),
        d_(diffusivity),
        k1_(FieldState::constant(grid, 0, 0)),
        k2_(k1_),
        k3_(k1_),
        k4_(k1_),
        ey_(k1_),
        tmp_(k1_) {}

  const FieldState& derivative(const FieldState& y) {
    rhs_.reaction(y, k1_);
    return k1_;
  }

  void step(FieldState& y, double h) {
    if (h != cached_h_) {
      eu_ = propagator_.multipliers(d_, 0.5 * h);
      ev_ = propagator_.multipliers(1.0, 0.5 * h);
      cached_h_ = h;
    }
    add_scaled(y, 0.5 * h, k1_, tmp_);
    propagate(tmp_, tmp_);
    rhs_.reaction(tmp_, k2_);
    propagate(y, ey_);
    add_scaled(ey_, 0.5 * h, k2_, tmp_);
    rhs_.reaction(tmp_, k3_);
    add_scaled(ey_, h, k3_, tmp_);
    propagate(tmp_, tmp_);
    rhs_.reaction(tmp_, k4_);
    add_scaled(y, h / 6.0, k1_, tmp_);
    propagate(tmp_, tmp_);
    axpy(h / 3.0, k2_, tmp_);
    axpy(h / 3.0, k3_, tmp_);
    propagate(tmp_, y);
    axpy(h / 6.0, k4_, y);
  }

 private:
  void propagate(const FieldState& in, FieldState& out) {
    propagator_.apply(in.u, out.u, eu_);
    propagator_.apply(in.v, out.v, ev_);
  }

  RhsEvaluator& rhs_;
  NeumannHeatPropagator propagator_;
  double d_;
  double cached_h_ = -1.0;
  std::vector<double> eu_, ev_;
  FieldState k1_, k2_, k3_, k4_, ey_, tmp_;
};

template <class Scheme>
void run(Scheme& scheme, const Grid& grid, FieldState y, double t0, double dt,
         const std::vector<double>& targets, const PdeOptions& options, FieldTrajectory& traj) {
  auto snapshot = [&](double t, const FieldState& s) {
    const MeanState integrals{integrate_field(grid, s.u), integrate_field(grid, s.v)};
    traj.times.push_back(t);
    traj.integrals.push_back(integrals);
    traj.masses.push_back(integrals.p_bar());
    if (options.keep_fields) traj.states.push_back(s);
  };
  auto record = [&](double t, const FieldState& s, const FieldState& rate) {
    traj.record_times.push_back(t);
    traj.record_integrals.push_back({integrate_field(grid, s.u), integrate_field(grid, s.v)});
    traj.record_mass_rates.push_back(integrate_field(grid, rate.u) + integrate_field(grid, rate.v));
  };

  snapshot(t0, y);
  double t = t0;
  double next_record = t0;
  bool force_record = true;
  std::size_t next_target = 0;
  try {
    while (next_target < targets.size()) {
      const double target = targets[next_target];
      const FieldState& rate = scheme.derivative(y);
      if (force_record || t >= next_record) {
        record(t, y, rate);
        next_record = t + options.record_interval;
        force_record = false;
      }
      double h = dt;
      bool lands = false;
      if (t + h >= target - 1e-12 * std::max(1.0, std::abs(target))) {
        h = target - t;
        lands = true;
      }
      scheme.step(y, h);
      t = lands ? target : t + h;
      ++traj.steps;
      if (!all_finite(y)) throw IntegrationError("integrate_pde: non-finite state", t - h);
      if (lands) {
        snapshot(t, y);
        force_record = true;
        ++next_target;
      }
    }
    record(t, y, scheme.derivative(y));
  } catch (const DomainError& e) {
    throw IntegrationError(std::string("integrate_pde: ") + e.what(), t);
  }
  traj.final_state = std::move(y);
  traj.dt = dt;
}

}  // namespace

FieldState pde_rhs(const ModelParams& params, const Grid& grid, const FieldState& s) {
  return evaluate(params, grid, s, false, "pde_rhs");
}

FieldState fast_rhs(const ModelParams& params, const Grid& grid, const FieldState& s) {
  return evaluate(params, grid, s, true, "fast_rhs");
}

double stationarity_residual(const ModelParams& params, const Grid& grid, const FieldState& s) {
  const FieldState r = pde_rhs(params, grid, s);
  double m = 0.0;
  for (std::size_t i = 0; i < r.u.size(); ++i) m = std::max({m, std::abs(r.u[i]), std::abs(r.v[i])});
  return m;
}

double diffusion_step_limit(const ModelParams& params, const Grid& grid, double safety) {
  const double h = grid.min_spacing();
  return safety * h * h / (2.0 * grid.dimension() * std::max(params.d, 1.0));
}

FieldTrajectory integrate_pde(const ModelParams& params, const Grid& grid, const FieldState& init, double t0,
                              double t1, const PdeOptions& options) {
  try {
    check_field(grid, init, "integrate_pde");
  } catch (const DomainError& e) {
    throw IntegrationError(e.what(), t0);
  }
  if (!(t1 >= t0)) throw DomainError("integrate_pde: t1 must not precede t0");
  if (!(options.record_interval >= 0.0)) throw ConfigError("integrate_pde: record_interval must be >= 0");

  double dt = 0.0;
  if (options.stepper == Stepper::ExplicitRk4) {
    const double limit = diffusion_step_limit(params, grid, options.cfl_safety);
    if (options.dt > 0.0) {
      if (options.dt > limit) {
        throw ConfigError("integrate_pde: dt = " + std::to_string(options.dt) +
                          " exceeds the diffusion stability limit " + std::to_string(limit));
      }
      dt = options.dt;
    } else {
      dt = limit;
    }
  } else {
    dt = options.dt > 0.0 ? options.dt : options.max_dt;
    if (!(dt > 0.0)) throw ConfigError("integrate_pde: max_dt must be > 0");
  }

  std::vector<double> targets;
  for (double t : options.output_times) {
    if (t > t0 && t < t1) targets.push_back(t);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  if (t1 > t0) targets.push_back(t1);

  FieldTrajectory traj;
  RhsEvaluator rhs(params, grid, options.fast_system);
  if (options.stepper == Stepper::ExplicitRk4) {
    ExplicitRk4 scheme(rhs, grid);
    run(scheme, grid, init, t0, dt, targets, options, traj);
  } else {
    IntegratingFactorRk4 scheme(rhs, grid, params.d);
    run(scheme, grid, init, t0, dt, targets, options, traj);
  }
  return traj;
}

}  // namespace cscdyn
