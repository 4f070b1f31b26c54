#pragma once

#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cscdyn/config.hpp"
#include "cscdyn/grid.hpp"
#include "cscdyn/paradox.hpp"
#include "cscdyn/pde.hpp"

namespace cscdyn {

enum ExitCode : int { kExitSuccess = 0, kExitConfig = 2, kExitNumerical = 3, kExitIo = 4 };

/// Maps an exception to the process exit code of its failure class.
[[nodiscard]] int exit_code_for(const std::exception_ptr& error);

/// Parameters whose slow manifold anchors on-manifold initial data: alpha_1 in
/// the paradox modes, alpha otherwise.
[[nodiscard]] ModelParams manifold_params(const ExperimentConfig& config);

/// Initial field for the PDE modes. Random noise is drawn from a
/// mt19937_64 seeded with config.seed and clipped at 0.
[[nodiscard]] FieldState make_initial_field(const ExperimentConfig& config, const Grid& grid);

/// Unperturbed initial mean state for the ODE modes.
[[nodiscard]] MeanState make_initial_mean(const ExperimentConfig& config);

/// One config per sweep entry (sigma, alpha, delta, d nested in that order);
/// a single copy when no sweep is configured.
[[nodiscard]] std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& config);

[[nodiscard]] nlohmann::ordered_json to_json(const ParadoxReport& report);

struct RunSummary {
  std::vector<std::filesystem::path> files;
  std::size_t entries = 1;
};

/// Runs the configured mode and writes its artifacts below config.output_dir
/// (sweep entries in sweep_NNN subdirectories, at most `workers` at a time).
/// Every directory gets a manifest.json with the resolved configuration.
RunSummary run_experiment(const ExperimentConfig& config, std::size_t workers = 1);

}  // namespace cscdyn
