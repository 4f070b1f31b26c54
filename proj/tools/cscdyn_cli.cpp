#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cscdyn/config.hpp"
#include "cscdyn/errors.hpp"
#include "cscdyn/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cscdyn::IoError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CSC/CC tumour dynamics: ODE and non-local PDE runs, slow manifold, stability, growth paradox"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::size_t workers = 1;
  std::optional<std::uint64_t> seed;

  const char* modes[] = {"ode", "pde", "slow-manifold", "stability", "paradox-ode", "paradox-pde", "fenichel"};
  for (const char* name : modes) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--workers", workers, "concurrent sweep entries")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for randomized initial data (overrides run.seed)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cscdyn::kExitConfig;
  }

  const auto mode = cscdyn::parse_mode(app.get_subcommands().front()->get_name());
  try {
    const std::string text = config_path.empty() ? std::string() : read_file(config_path);
    auto config = cscdyn::parse_config(text, mode);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (seed) config.seed = *seed;
    const auto summary = cscdyn::run_experiment(config, workers);
    std::cout << cscdyn::to_string(config.mode) << ": " << summary.entries << " run(s), " << summary.files.size()
              << " file(s) in " << config.output_dir << '\n';
    return cscdyn::kExitSuccess;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cscdyn::exit_code_for(std::current_exception());
  }
}
