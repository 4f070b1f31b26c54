#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cscdyn/config.hpp"
#include "cscdyn/errors.hpp"
#include "cscdyn/experiment.hpp"

using namespace cscdyn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cscdyn_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig config_for(const std::string& text, const fs::path& out) {
  auto c = parse_config(text);
  c.output_dir = out.string();
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CSCDYN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("identical configs give bit-identical output") {
  const std::string text = R"(
[run]
mode = pde
seed = 7
[domain]
nodes = 21
[init]
type = random
u = 0.3
v = 0.2
amplitude = 0.05
[numerics]
t_end = 2
output_interval = 0.5
)";
  const auto a = scratch("repro_a"), b = scratch("repro_b");
  (void)run_experiment(config_for(text, a));
  (void)run_experiment(config_for(text, b));
  for (const char* f : {"trajectory.csv", "final_field.csv", "summary.json"}) {
    CHECK(slurp(a / f) == slurp(b / f));
    CHECK_FALSE(slurp(a / f).empty());
  }
  const auto head = slurp(a / "trajectory.csv");
  CHECK(head.rfind("t,u_bar,v_bar,p_bar,E\n", 0) == 0);

  const auto other = scratch("repro_c");
  auto c = config_for(text, other);
  c.seed = 8;
  (void)run_experiment(c);
  CHECK(slurp(a / "final_field.csv") != slurp(other / "final_field.csv"));
}

TEST_CASE("sweep over death rates writes one curve per entry") {
  const auto out = scratch("sweep");
  const auto summary = run_experiment(
      config_for("[run]\nmode = slow-manifold\n[sweep]\nalpha = 0.4, 0.8\n[curve]\npoints = 51\n", out), 2);
  CHECK(summary.entries == 2);
  REQUIRE(fs::exists(out / "sweep_000" / "curve.csv"));
  REQUIRE(fs::exists(out / "sweep_001" / "curve.csv"));
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["entries"].size() == 2);
  CHECK(manifest["entries"][0]["alpha"] == 0.4);
  CHECK(manifest["entries"][1]["alpha"] == 0.8);

  auto read = [](const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<double> v;
    while (std::getline(in, line)) v.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    return v;
  };
  const auto lo = read(out / "sweep_000" / "curve.csv");
  const auto hi = read(out / "sweep_001" / "curve.csv");
  REQUIRE(lo.size() == 51);
  for (std::size_t i = 1; i + 1 < lo.size(); ++i) CHECK(hi[i] < lo[i]);
}

TEST_CASE("stability mode reports the extinction state") {
  const auto out = scratch("stability");
  (void)run_experiment(config_for(
      "[run]\nmode = stability\n[model]\nd = 0.5\nalpha = 0.5\n[stability]\nequilibrium = P0\n", out));
  const auto j = nlohmann::json::parse(slurp(out / "stability.json"));
  REQUIRE(j["equilibria"].size() == 1);
  CHECK(j["equilibria"][0]["classification"] == "stable node");
  CHECK(j["equilibria"][0]["conditions"].size() == 2);
  const auto csv = slurp(out / "stability.csv");
  CHECK(csv.rfind("equilibrium,j,mu,lambda_1,lambda_2\nP0,1,", 0) == 0);
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("paradox-ode mode") {
  const auto out = scratch("paradox");
  (void)run_experiment(config_for(R"(
[run]
mode = paradox-ode
[model]
alpha_1 = 0.8
alpha_2 = 0.2
delta = 0.01
[init]
type = on-manifold
p = 0.5
)",
                                  out));
  const auto j = nlohmann::json::parse(slurp(out / "paradox.json"));
  CHECK(j["verdict"] == "paradox");
  CHECK(fs::exists(out / "mass_1.csv"));
  CHECK(fs::exists(out / "mass_2.csv"));
}

TEST_CASE("exit codes by failure class") {
  CHECK(exit_code_for(std::make_exception_ptr(ConfigError("x"))) == kExitConfig);
  CHECK(exit_code_for(std::make_exception_ptr(PreconditionError("x"))) == kExitConfig);
  CHECK(exit_code_for(std::make_exception_ptr(IoError("x"))) == kExitIo);
  CHECK(exit_code_for(std::make_exception_ptr(IntegrationError("x", 1.0))) == kExitNumerical);
  CHECK(exit_code_for(std::make_exception_ptr(DomainError("x"))) == kExitNumerical);
}

TEST_CASE("command line") {
  const auto dir = scratch("cli");
  const auto good = dir / "good.ini";
  std::ofstream(good) << "[model]\nalpha = 0.5\n[numerics]\nt_end = 5\n";
  const auto bad = dir / "bad.ini";
  std::ofstream(bad) << "[model]\nalpha = -1\n";

  CHECK(run_cli("ode --config " + good.string() + " --out " + (dir / "ode").string()) == 0);
  CHECK(fs::exists(dir / "ode" / "trajectory.csv"));
  CHECK(run_cli("ode --config " + bad.string() + " --out " + (dir / "bad").string()) == 2);
  CHECK(run_cli("ode --config " + (dir / "missing.ini").string()) == 4);
  CHECK(run_cli("nonsense") == 2);
  CHECK(run_cli("slow-manifold --config " + good.string() + " --workers 0") == 2);
}
