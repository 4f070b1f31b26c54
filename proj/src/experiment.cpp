#include "cscdyn/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <thread>

#include "cscdyn/csv.hpp"
#include "cscdyn/diagnostics.hpp"
#include "cscdyn/errors.hpp"
#include "cscdyn/ode.hpp"
#include "cscdyn/slow_manifold.hpp"
#include "cscdyn/stability.hpp"

namespace cscdyn {

namespace fs = std::filesystem;

int exit_code_for(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const ConfigError&) {
    return kExitConfig;
  } catch (const PreconditionError&) {
    return kExitConfig;
  } catch (const IoError&) {
    return kExitIo;
  } catch (const fs::filesystem_error&) {
    return kExitIo;
  } catch (const IntegrationError&) {
    return kExitNumerical;
  } catch (const CurveError&) {
    return kExitNumerical;
  } catch (const NoSolutionError&) {
    return kExitNumerical;
  } catch (const DomainError&) {
    return kExitNumerical;
  } catch (const NotImplementedError&) {
    return kExitNumerical;
  } catch (...) {
    return 1;
  }
}

ModelParams manifold_params(const ExperimentConfig& config) {
  const bool paradox = config.mode == Mode::ParadoxOde || config.mode == Mode::ParadoxPde;
  return paradox ? config.params.with_alpha(config.alpha_1) : config.params;
}

namespace {

double omega_of(const ExperimentConfig& config) {
  const bool spatial = config.mode == Mode::Pde || config.mode == Mode::ParadoxPde || config.mode == Mode::Fenichel ||
                       config.mode == Mode::Stability || config.mode == Mode::SlowManifold;
  return spatial ? config.params.domain.measure() : 1.0;
}

MeanState base_state(const ExperimentConfig& config, double omega) {
  switch (config.init.kind) {
    case InitKind::Constant:
    case InitKind::Random:
      return {config.init.u, config.init.v};
    case InitKind::OnManifold:
    case InitKind::Perturbed:
      return on_manifold_state(manifold_params(config), config.init.p, omega);
  }
  return {};
}

}  // namespace

MeanState make_initial_mean(const ExperimentConfig& config) { return base_state(config, 1.0); }

FieldState make_initial_field(const ExperimentConfig& config, const Grid& grid) {
  const MeanState base = base_state(config, grid.measure());
  FieldState f = FieldState::constant(grid, base.u_bar, base.v_bar);
  if (config.init.kind == InitKind::Perturbed) {
    const double k = config.init.wavenumber * std::numbers::pi / grid.domain().lengths[0];
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double shape = config.init.amplitude * std::cos(k * grid.position(i)[0]);
      f.u[i] += shape;
      f.v[i] += shape;
    }
  } else if (config.init.kind == InitKind::Random) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> noise(-config.init.amplitude, config.init.amplitude);
    for (auto& x : f.u) x = std::max(0.0, x + noise(rng));
    for (auto& x : f.v) x = std::max(0.0, x + noise(rng));
  }
  return f;
}

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& config) {
  auto or_base = [](const std::vector<double>& list, double base) {
    return list.empty() ? std::vector<double>{base} : list;
  };
  std::vector<ExperimentConfig> out;
  for (double sigma : or_base(config.sweep.sigma, config.params.kernel.sigma())) {
    for (double alpha : or_base(config.sweep.alpha, config.params.alpha)) {
      for (double delta : or_base(config.sweep.delta, config.params.delta)) {
        for (double d : or_base(config.sweep.d, config.params.d)) {
          ExperimentConfig c = config;
          c.params.kernel = KernelSpec(sigma);
          c.params.alpha = alpha;
          c.params.delta = delta;
          c.params.d = d;
          c.sweep = {};
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const ParadoxReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"alpha_1", r.alpha_1},
          {"alpha_2", r.alpha_2},
          {"t_a", r.t_a},
          {"t_b", r.t_b},
          {"matched_mass", r.matched_mass},
          {"theta_window", r.theta_window},
          {"theta_samples", r.theta_samples},
          {"theta_satisfied", r.theta_satisfied},
          {"min_gap", r.min_gap},
          {"settle_time_1", r.settle_time_1},
          {"settle_time_2", r.settle_time_2},
          {"note", r.note}};
}

namespace {

void write_json(const fs::path& path, const nlohmann::ordered_json& j, std::vector<fs::path>& files) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed on " + path.string());
  files.push_back(path);
}

std::vector<double> output_times(double t_end, double interval) {
  std::vector<double> t;
  const auto n = static_cast<std::size_t>(std::floor(t_end / interval + 1e-9));
  for (std::size_t i = 1; i <= n; ++i) t.push_back(static_cast<double>(i) * interval);
  return t;
}

void write_ode_samples(const fs::path& path, const OdeTrajectory& traj, const std::vector<double>& times,
                       std::vector<fs::path>& files) {
  CsvWriter csv(path, {"t", "u_bar", "v_bar", "p_bar"});
  for (double t : times) {
    const MeanState s = traj.state_at(t);
    csv.row({t, s.u_bar, s.v_bar, s.p_bar()});
  }
  csv.close();
  files.push_back(path);
}

void write_mass_record(const fs::path& path, const FieldTrajectory& traj, double omega, std::vector<fs::path>& files) {
  CsvWriter csv(path, {"t", "u_bar", "v_bar", "p_bar", "dp_dt"});
  for (std::size_t i = 0; i < traj.record_times.size(); ++i) {
    const MeanState s = (1.0 / omega) * traj.record_integrals[i];
    csv.row({traj.record_times[i], s.u_bar, s.v_bar, s.p_bar(), traj.record_mass_rates[i] / omega});
  }
  csv.close();
  files.push_back(path);
}

void run_ode(const ExperimentConfig& c, const fs::path& dir, std::vector<fs::path>& files) {
  const auto traj = integrate_ode(c.params, make_initial_mean(c), 0.0, c.t_end, c.ode);
  auto times = output_times(c.t_end, c.output_interval);
  times.insert(times.begin(), 0.0);
  write_ode_samples(dir / "trajectory.csv", traj, times, files);
}

void run_pde(const ExperimentConfig& c, const fs::path& dir, std::vector<fs::path>& files) {
  const Grid grid(c.params.domain);
  PdeOptions opt = c.pde;
  opt.output_times = output_times(c.t_end, c.output_interval);
  opt.keep_fields = true;
  const auto traj = integrate_pde(c.params, grid, make_initial_field(c, grid), 0.0, c.t_end, opt);

  std::vector<std::string> header{"t", "u_bar", "v_bar", "p_bar"};
  if (c.energy) header.emplace_back("E");
  CsvWriter csv(dir / "trajectory.csv", header);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const MeanState m = (1.0 / grid.measure()) * traj.integrals[i];
    std::vector<double> row{traj.times[i], m.u_bar, m.v_bar, m.p_bar()};
    if (c.energy) {
      const FieldState& s = traj.states[i];
      row.push_back(energy_functional(grid, s, pde_rhs(c.params, grid, s)));
    }
    csv.row(row);
  }
  csv.close();
  files.push_back(dir / "trajectory.csv");

  const bool two_d = grid.dimension() == 2;
  CsvWriter field(dir / "final_field.csv",
                  two_d ? std::vector<std::string>{"x", "y", "u", "v"} : std::vector<std::string>{"x", "u", "v"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto pos = grid.position(i);
    if (two_d) {
      field.row({pos[0], pos[1], traj.final_state.u[i], traj.final_state.v[i]});
    } else {
      field.row({pos[0], traj.final_state.u[i], traj.final_state.v[i]});
    }
  }
  field.close();
  files.push_back(dir / "final_field.csv");

  nlohmann::ordered_json summary{{"steps", traj.steps},
                                 {"dt", traj.dt},
                                 {"final_stationarity_residual", stationarity_residual(c.params, grid, traj.final_state)}};
  if (c.params.alpha <= 1.0) {
    summary["invariant_region_violation"] = invariant_region_audit(traj, c.params);
  } else {
    summary["invariant_region_violation"] = nullptr;
  }
  write_json(dir / "summary.json", summary, files);
}

void run_slow_manifold(const ExperimentConfig& c, const fs::path& dir, std::vector<fs::path>& files) {
  const double omega = omega_of(c);
  const auto curve = slow_manifold_curve(c.params, linspace(0.0, 1.0, c.curve_points), c.curve_method, omega);
  CsvWriter csv(dir / "curve.csv", {"alpha", "u", "v"});
  for (const auto& s : curve.samples) csv.row({curve.alpha, s.u_bar, s.v_bar});
  csv.close();
  files.push_back(dir / "curve.csv");
}

void run_stability(const ExperimentConfig& c, const fs::path& dir, std::vector<fs::path>& files) {
  const auto eqs = equilibria(c.params);
  CsvWriter csv(dir / "stability.csv", {"equilibrium", "j", "mu", "lambda_1", "lambda_2"});
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (const auto& e : eqs) {
    const std::string tag = e.label == EquilibriumLabel::Extinction ? "P0"
                            : e.label == EquilibriumLabel::PureCC   ? "P1"
                                                                    : "P2";
    if (c.equilibrium != "all" && c.equilibrium != tag) continue;
    nlohmann::ordered_json entry{{"equilibrium", tag}, {"exists", e.exists}};
    if (!e.exists) {
      entry["note"] = "k(v) = alpha has no root";
      reports.push_back(entry);
      continue;
    }
    const auto report = classify_pde_equilibrium(c.params, e, c.params.domain, c.j_max);
    entry["u"] = report.equilibrium.point.u_bar;
    entry["v"] = report.equilibrium.point.v_bar;
    entry["classification"] = to_string(report.classification);
    nlohmann::ordered_json conditions = nlohmann::ordered_json::object();
    for (const auto& cond : report.conditions) conditions[cond.name] = cond.value;
    entry["conditions"] = conditions;
    entry["ode_classification"] = to_string(classify_ode_equilibrium(c.params, e).kind);
    reports.push_back(entry);
    for (const auto& row : report.modes) {
      csv.row(std::vector<std::string>{tag, std::to_string(row.j), format_number(row.mu), format_number(row.lambda_1),
                                       format_number(row.lambda_2)});
    }
  }
  csv.close();
  files.push_back(dir / "stability.csv");

  const double omega = c.params.domain.measure();
  if (c.params.alpha <= omega) {
    const auto curve = slow_manifold_curve(c.params, linspace(0.0, 1.0, c.curve_points), c.curve_method, omega);
    MarginOptions mo;
    mo.j_max = c.j_max;
    const auto margin = normal_hyperbolicity_margin(c.params, curve, c.params.domain, mo);
    CsvWriter m(dir / "margin.csv", {"u", "v", "margin"});
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
      m.row({curve.samples[i].u_bar, curve.samples[i].v_bar, margin.margins[i]});
    }
    m.close();
    files.push_back(dir / "margin.csv");
    write_json(dir / "stability.json",
               {{"equilibria", reports},
                {"normal_hyperbolicity",
                 {{"infimum", margin.infimum},
                  {"u", margin.location.u_bar},
                  {"v", margin.location.v_bar},
                  {"hyperbolic", margin.hyperbolic}}}},
               files);
  } else {
    write_json(dir / "stability.json", {{"equilibria", reports}}, files);
  }
}

void run_paradox_ode_mode(const ExperimentConfig& c, const fs::path& dir, std::vector<fs::path>& files) {
  const auto run = run_paradox_ode(c.params.with_alpha(c.alpha_1), c.params.with_alpha(c.alpha_2),
                                   make_initial_mean(c), c.paradox, c.ode);
  write_json(dir / "paradox.json", to_json(run.report), files);
  auto times = output_times(c.paradox.horizon, c.output_interval);
  times.insert(times.begin(), 0.0);
  write_ode_samples(dir / "mass_1.csv", run.run_1, times, files);
  write_ode_samples(dir / "mass_2.csv", run.run_2, times, files);
}

void run_paradox_pde_mode(const ExperimentConfig& c, const fs::path& dir, std::vector<fs::path>& files) {
  const Grid grid(c.params.domain);
  const auto run = run_paradox_pde(c.params.with_alpha(c.alpha_1), c.params.with_alpha(c.alpha_2), grid,
                                   make_initial_field(c, grid), c.paradox, c.pde);
  auto report = to_json(run.report);
  report["init_distance"] = run.init_distance;
  write_json(dir / "paradox.json", report, files);
  write_mass_record(dir / "mass_1.csv", run.run_1, grid.measure(), files);
  write_mass_record(dir / "mass_2.csv", run.run_2, grid.measure(), files);
}

void run_fenichel(const ExperimentConfig& c, const fs::path& dir, std::vector<fs::path>& files) {
  const Grid grid(c.params.domain);
  ScalingOptions opt;
  opt.settle_time = c.fenichel_settle_time;
  opt.horizon = c.fenichel_horizon;
  opt.curve_points = c.fenichel_curve_points;
  opt.pde = c.pde;
  const auto rows = manifold_distance_scaling(c.params, c.fenichel_deltas, grid, make_initial_field(c, grid), opt);
  CsvWriter csv(dir / "fenichel.csv", {"delta", "sup_distance", "at_time"});
  for (const auto& r : rows) csv.row({r.delta, r.sup_distance, r.at_time});
  csv.close();
  files.push_back(dir / "fenichel.csv");
}

std::vector<fs::path> run_single(const ExperimentConfig& c, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<fs::path> files;
  switch (c.mode) {
    case Mode::Ode: run_ode(c, dir, files); break;
    case Mode::Pde: run_pde(c, dir, files); break;
    case Mode::SlowManifold: run_slow_manifold(c, dir, files); break;
    case Mode::Stability: run_stability(c, dir, files); break;
    case Mode::ParadoxOde: run_paradox_ode_mode(c, dir, files); break;
    case Mode::ParadoxPde: run_paradox_pde_mode(c, dir, files); break;
    case Mode::Fenichel: run_fenichel(c, dir, files); break;
  }
  nlohmann::ordered_json files_json = nlohmann::ordered_json::array();
  for (const auto& f : files) files_json.push_back(f.filename().string());
  write_json(dir / "manifest.json", {{"config", to_json(c)}, {"files", files_json}}, files);
  return files;
}

std::string entry_dir(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sweep_%03zu", i);
  return buf;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config, std::size_t workers) {
  validate(config);
  const fs::path root(config.output_dir);
  RunSummary summary;
  if (!config.sweep.active()) {
    summary.files = run_single(config, root);
    return summary;
  }

  const auto entries = expand_sweep(config);
  for (const auto& e : entries) validate(e);
  summary.entries = entries.size();
  std::vector<std::vector<fs::path>> produced(entries.size());
  std::vector<std::exception_ptr> errors(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        produced[i] = run_single(entries[i], root / entry_dir(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n = std::max<std::size_t>(1, std::min(workers, entries.size()));
  for (std::size_t w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& p = entries[i].params;
    list.push_back({{"dir", entry_dir(i)},
                    {"sigma", p.kernel.sigma()},
                    {"alpha", p.alpha},
                    {"delta", p.delta},
                    {"d", p.d}});
    summary.files.insert(summary.files.end(), produced[i].begin(), produced[i].end());
  }
  write_json(root / "manifest.json", {{"config", to_json(config)}, {"entries", list}}, summary.files);
  return summary;
}

}  // namespace cscdyn
