#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cscdyn/model.hpp"
#include "cscdyn/ode.hpp"
#include "cscdyn/paradox.hpp"
#include "cscdyn/pde.hpp"
#include "cscdyn/slow_manifold.hpp"

namespace cscdyn {

enum class Mode { Ode, Pde, SlowManifold, Stability, ParadoxOde, ParadoxPde, Fenichel };
[[nodiscard]] std::string to_string(Mode m);
[[nodiscard]] std::optional<Mode> parse_mode(std::string_view name);

enum class InitKind {
  Constant,    ///< (u, v)
  OnManifold,  ///< slow-manifold point with total density p
  Perturbed,   ///< on-manifold base plus amplitude * cos(wavenumber pi x / L) on both fields
  Random,      ///< constant (u, v) plus seeded uniform noise in [-amplitude, amplitude]
};
[[nodiscard]] std::string to_string(InitKind k);

struct InitSpec {
  InitKind kind = InitKind::Constant;
  double u = 0.4;
  double v = 0.3;
  double p = 0.5;
  double amplitude = 1e-3;
  int wavenumber = 1;
};

/// Parameter lists expanded as a cartesian product, sigma outermost.
struct SweepSpec {
  std::vector<double> sigma;
  std::vector<double> alpha;
  std::vector<double> delta;
  std::vector<double> d;
  [[nodiscard]] bool active() const noexcept { return !sigma.empty() || !alpha.empty() || !delta.empty() || !d.empty(); }
};

struct ExperimentConfig {
  Mode mode = Mode::Ode;
  std::uint64_t seed = 0;
  ModelParams params{};
  double alpha_1 = 0.8;
  double alpha_2 = 0.2;
  InitSpec init{};

  OdeOptions ode{};
  PdeOptions pde{};
  double t_end = 100.0;
  double output_interval = 1.0;
  bool energy = true;

  std::size_t curve_points = 101;
  CurveMethod curve_method = CurveMethod::RootFind;

  std::string equilibrium = "all";
  std::size_t j_max = 10;

  ParadoxOptions paradox{};

  std::vector<double> fenichel_deltas{0.1, 0.05, 0.025};
  double fenichel_settle_time = 20.0;
  double fenichel_horizon = 300.0;
  std::size_t fenichel_curve_points = 1001;

  SweepSpec sweep{};
  std::string output_dir = "out";
};

/// Parses a sectioned key = value document ([section] headers, '#' or ';'
/// comment lines, comma-separated lists). Every key is optional; missing
/// keys take the defaults of ExperimentConfig. Unknown sections or keys and
/// out-of-range values throw ConfigError naming the key and the constraint.
///
/// The mode comes from run.mode or from `mode_override`; if both are given
/// they must agree.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text, std::optional<Mode> mode_override = std::nullopt);

/// Checks cross-field constraints; parse_config calls it.
void validate(const ExperimentConfig& config);

/// Fully resolved configuration, every default spelled out, using the same
/// section/key names as the input grammar.
[[nodiscard]] nlohmann::ordered_json to_json(const ExperimentConfig& config);

}  // namespace cscdyn
