#include "cscdyn/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "cscdyn/errors.hpp"

namespace cscdyn {

namespace {

constexpr std::pair<Mode, const char*> kModeNames[] = {
    {Mode::Ode, "ode"},
    {Mode::Pde, "pde"},
    {Mode::SlowManifold, "slow-manifold"},
    {Mode::Stability, "stability"},
    {Mode::ParadoxOde, "paradox-ode"},
    {Mode::ParadoxPde, "paradox-pde"},
    {Mode::Fenichel, "fenichel"},
};

constexpr std::pair<InitKind, const char*> kInitNames[] = {
    {InitKind::Constant, "constant"},
    {InitKind::OnManifold, "on-manifold"},
    {InitKind::Perturbed, "perturbed"},
    {InitKind::Random, "random"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) fail(key, "expected a number, got '" + t + "'");
  if (!std::isfinite(x)) fail(key, "value must be finite");
  return x;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) fail(key, "expected an integer, got '" + t + "'");
  return x;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  const long long x = to_integer(key, text);
  if (x < 0) fail(key, "value >= 0");
  return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  fail(key, "expected true or false, got '" + t + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
  if (out.empty()) fail(key, "list must be non-empty");
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

void require(bool ok, const std::string& key, const std::string& constraint, double got) {
  if (!ok) fail(key, constraint + " (got " + fmt(got) + ")");
}

struct DomainInput {
  int dimension = 1;
  double length = 1.0;
  double length_y = 1.0;
  std::size_t nodes = 101;
  std::size_t nodes_y = 101;
};

using Setter = std::function<void(ExperimentConfig&, DomainInput&, double&, const std::string&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> table = [] {
    std::map<std::string, std::map<std::string, Setter>> t;
    auto num = [](double ExperimentConfig::*field) -> Setter {
      return [field](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
        c.*field = to_double(k, v);
      };
    };
    t["run"]["mode"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      const auto m = parse_mode(trim(v));
      if (!m) fail(k, "unknown mode '" + trim(v) + "'");
      c.mode = *m;
    };
    t["run"]["seed"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      const long long s = to_integer(k, v);
      if (s < 0) fail(k, "seed >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    };

    t["model"]["sigma"] = [](ExperimentConfig&, DomainInput&, double& sigma, const std::string& k,
                             const std::string& v) { sigma = to_double(k, v); };
    t["model"]["alpha"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      c.params.alpha = to_double(k, v);
    };
    t["model"]["delta"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      c.params.delta = to_double(k, v);
    };
    t["model"]["d"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      c.params.d = to_double(k, v);
    };
    t["model"]["alpha_1"] = num(&ExperimentConfig::alpha_1);
    t["model"]["alpha_2"] = num(&ExperimentConfig::alpha_2);

    t["domain"]["dimension"] = [](ExperimentConfig&, DomainInput& d, double&, const std::string& k,
                                  const std::string& v) { d.dimension = static_cast<int>(to_integer(k, v)); };
    t["domain"]["length"] = [](ExperimentConfig&, DomainInput& d, double&, const std::string& k,
                               const std::string& v) { d.length = to_double(k, v); };
    t["domain"]["length_y"] = [](ExperimentConfig&, DomainInput& d, double&, const std::string& k,
                                 const std::string& v) { d.length_y = to_double(k, v); };
    t["domain"]["nodes"] = [](ExperimentConfig&, DomainInput& d, double&, const std::string& k,
                              const std::string& v) { d.nodes = to_count(k, v); };
    t["domain"]["nodes_y"] = [](ExperimentConfig&, DomainInput& d, double&, const std::string& k,
                                const std::string& v) { d.nodes_y = to_count(k, v); };

    t["init"]["type"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      const std::string name = trim(v);
      for (const auto& [kind, n] : kInitNames) {
        if (name == n) {
          c.init.kind = kind;
          return;
        }
      }
      fail(k, "unknown init type '" + name + "'");
    };
    t["init"]["u"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      c.init.u = to_double(k, v);
    };
    t["init"]["v"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      c.init.v = to_double(k, v);
    };
    t["init"]["p"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      c.init.p = to_double(k, v);
    };
    t["init"]["amplitude"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                const std::string& v) { c.init.amplitude = to_double(k, v); };
    t["init"]["wavenumber"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                 const std::string& v) { c.init.wavenumber = static_cast<int>(to_integer(k, v)); };

    t["numerics"]["atol"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                               const std::string& v) { c.ode.adaptive.atol = to_double(k, v); };
    t["numerics"]["rtol"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                               const std::string& v) { c.ode.adaptive.rtol = to_double(k, v); };
    t["numerics"]["max_step"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                   const std::string& v) { c.ode.adaptive.max_step = to_double(k, v); };
    t["numerics"]["t_end"] = num(&ExperimentConfig::t_end);
    t["numerics"]["output_interval"] = num(&ExperimentConfig::output_interval);
    t["numerics"]["energy"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                 const std::string& v) { c.energy = to_bool(k, v); };
    t["numerics"]["stepper"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                  const std::string& v) {
      const std::string s = trim(v);
      if (s == "rk4") {
        c.pde.stepper = Stepper::ExplicitRk4;
      } else if (s == "ifrk4") {
        c.pde.stepper = Stepper::IntegratingFactorRk4;
      } else {
        fail(k, "stepper is rk4 or ifrk4, got '" + s + "'");
      }
    };
    t["numerics"]["cfl_safety"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                     const std::string& v) { c.pde.cfl_safety = to_double(k, v); };
    t["numerics"]["dt"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      c.pde.dt = to_double(k, v);
    };
    t["numerics"]["max_dt"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                 const std::string& v) { c.pde.max_dt = to_double(k, v); };
    t["numerics"]["record_interval"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                          const std::string& v) { c.pde.record_interval = to_double(k, v); };

    t["curve"]["points"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                              const std::string& v) { c.curve_points = to_count(k, v); };
    t["curve"]["method"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                              const std::string& v) {
      const std::string s = trim(v);
      if (s == "root-find") {
        c.curve_method = CurveMethod::RootFind;
      } else if (s == "graph-ode") {
        c.curve_method = CurveMethod::GraphOde;
      } else {
        fail(k, "method is root-find or graph-ode, got '" + s + "'");
      }
    };

    t["stability"]["equilibrium"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                       const std::string& v) {
      const std::string s = trim(v);
      if (s != "P0" && s != "P1" && s != "P2" && s != "all") fail(k, "equilibrium is P0, P1, P2 or all");
      c.equilibrium = s;
    };
    t["stability"]["j_max"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                 const std::string& v) { c.j_max = to_count(k, v); };

    t["paradox"]["horizon"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                 const std::string& v) { c.paradox.horizon = to_double(k, v); };
    t["paradox"]["theta_points"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                      const std::string& v) { c.paradox.theta_points = to_count(k, v); };
    t["paradox"]["theta_min_fraction"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                            const std::string& v) { c.paradox.theta_min_fraction = to_double(k, v); };
    t["paradox"]["settle_tolerance"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                          const std::string& v) { c.paradox.settle_tolerance = to_double(k, v); };
    t["paradox"]["strict_margin"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                       const std::string& v) { c.paradox.strict_margin = to_double(k, v); };
    t["paradox"]["refute_margin"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                       const std::string& v) { c.paradox.refute_margin = to_double(k, v); };
    t["paradox"]["sample_spacing"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                        const std::string& v) { c.paradox.sample_spacing = to_double(k, v); };

    t["fenichel"]["deltas"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                 const std::string& v) { c.fenichel_deltas = to_list(k, v); };
    t["fenichel"]["settle_time"] = num(&ExperimentConfig::fenichel_settle_time);
    t["fenichel"]["horizon"] = num(&ExperimentConfig::fenichel_horizon);
    t["fenichel"]["curve_points"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                                       const std::string& v) { c.fenichel_curve_points = to_count(k, v); };

    t["sweep"]["sigma"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                             const std::string& v) { c.sweep.sigma = to_list(k, v); };
    t["sweep"]["alpha"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                             const std::string& v) { c.sweep.alpha = to_list(k, v); };
    t["sweep"]["delta"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k,
                             const std::string& v) { c.sweep.delta = to_list(k, v); };
    t["sweep"]["d"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      c.sweep.d = to_list(k, v);
    };

    t["output"]["dir"] = [](ExperimentConfig& c, DomainInput&, double&, const std::string& k, const std::string& v) {
      c.output_dir = trim(v);
      if (c.output_dir.empty()) fail(k, "directory must be non-empty");
    };
    return t;
  }();
  return table;
}

bool is_paradox(Mode m) { return m == Mode::ParadoxOde || m == Mode::ParadoxPde; }

}  // namespace

std::string to_string(Mode m) {
  for (const auto& [mode, name] : kModeNames) {
    if (mode == m) return name;
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (const auto& [mode, n] : kModeNames) {
    if (name == n) return mode;
  }
  return std::nullopt;
}

std::string to_string(InitKind k) {
  for (const auto& [kind, name] : kInitNames) {
    if (kind == k) return name;
  }
  return "?";
}

void validate(const ExperimentConfig& c) {
  const ModelParams& p = c.params;
  require(p.kernel.sigma() >= 1.0, "model.sigma", "sigma >= 1", p.kernel.sigma());
  require(p.alpha > 0.0, "model.alpha", "alpha > 0", p.alpha);
  require(p.delta >= 0.0 && p.delta <= 1.0, "model.delta", "0 <= delta <= 1", p.delta);
  require(p.d > 0.0, "model.d", "d > 0", p.d);
  if (is_paradox(c.mode)) {
    require(c.alpha_2 > 0.0, "model.alpha_2", "alpha_2 > 0", c.alpha_2);
    require(c.alpha_1 > c.alpha_2, "model.alpha_1", "alpha_1 > alpha_2", c.alpha_1);
    if (!c.sweep.alpha.empty()) fail("sweep.alpha", "not applicable in paradox modes (use alpha_1, alpha_2)");
  }

  const DomainSpec& dom = p.domain;
  require(dom.dimension == 1 || dom.dimension == 2, "domain.dimension", "dimension is 1 or 2", dom.dimension);
  require(dom.lengths[0] > 0.0, "domain.length", "length > 0", dom.lengths[0]);
  require(dom.nodes[0] >= 3, "domain.nodes", "nodes >= 3", static_cast<double>(dom.nodes[0]));
  if (dom.dimension == 2) {
    require(dom.lengths[1] > 0.0, "domain.length_y", "length_y > 0", dom.lengths[1]);
    require(dom.nodes[1] >= 3, "domain.nodes_y", "nodes_y >= 3", static_cast<double>(dom.nodes[1]));
  }

  const InitSpec& in = c.init;
  require(in.u >= 0.0, "init.u", "u >= 0", in.u);
  require(in.v >= 0.0, "init.v", "v >= 0", in.v);
  require(in.p >= 0.0 && in.p <= 1.0, "init.p", "0 <= p <= 1", in.p);
  require(in.amplitude >= 0.0, "init.amplitude", "amplitude >= 0", in.amplitude);
  require(in.wavenumber >= 0, "init.wavenumber", "wavenumber >= 0", in.wavenumber);

  require(c.ode.adaptive.atol > 0.0, "numerics.atol", "atol > 0", c.ode.adaptive.atol);
  require(c.ode.adaptive.rtol > 0.0, "numerics.rtol", "rtol > 0", c.ode.adaptive.rtol);
  require(c.ode.adaptive.max_step > 0.0, "numerics.max_step", "max_step > 0", c.ode.adaptive.max_step);
  require(c.t_end > 0.0, "numerics.t_end", "t_end > 0", c.t_end);
  require(c.output_interval > 0.0, "numerics.output_interval", "output_interval > 0", c.output_interval);
  require(c.pde.cfl_safety > 0.0 && c.pde.cfl_safety <= 1.0, "numerics.cfl_safety", "0 < cfl_safety <= 1",
          c.pde.cfl_safety);
  require(c.pde.dt >= 0.0, "numerics.dt", "dt >= 0", c.pde.dt);
  require(c.pde.max_dt > 0.0, "numerics.max_dt", "max_dt > 0", c.pde.max_dt);
  require(c.pde.record_interval > 0.0, "numerics.record_interval", "record_interval > 0", c.pde.record_interval);

  require(c.curve_points >= 2, "curve.points", "points >= 2", static_cast<double>(c.curve_points));
  require(c.j_max >= 1, "stability.j_max", "j_max >= 1", static_cast<double>(c.j_max));

  const ParadoxOptions& px = c.paradox;
  require(px.horizon > 0.0, "paradox.horizon", "horizon > 0", px.horizon);
  require(px.theta_points >= 2, "paradox.theta_points", "theta_points >= 2", static_cast<double>(px.theta_points));
  require(px.theta_min_fraction > 0.0 && px.theta_min_fraction < 1.0, "paradox.theta_min_fraction",
          "0 < theta_min_fraction < 1", px.theta_min_fraction);
  require(px.settle_tolerance > 0.0, "paradox.settle_tolerance", "settle_tolerance > 0", px.settle_tolerance);
  require(px.strict_margin >= 0.0, "paradox.strict_margin", "strict_margin >= 0", px.strict_margin);
  require(px.refute_margin >= 0.0, "paradox.refute_margin", "refute_margin >= 0", px.refute_margin);
  require(px.sample_spacing >= 0.0, "paradox.sample_spacing", "sample_spacing >= 0", px.sample_spacing);

  for (std::size_t i = 0; i < c.fenichel_deltas.size(); ++i) {
    require(c.fenichel_deltas[i] > 0.0, "fenichel.deltas", "deltas > 0", c.fenichel_deltas[i]);
    if (i > 0) {
      require(c.fenichel_deltas[i] < c.fenichel_deltas[i - 1], "fenichel.deltas", "deltas strictly decreasing",
              c.fenichel_deltas[i]);
    }
  }
  if (c.fenichel_deltas.empty()) fail("fenichel.deltas", "list must be non-empty");
  require(c.fenichel_horizon > c.fenichel_settle_time, "fenichel.horizon", "horizon > settle_time",
          c.fenichel_horizon);
  require(c.fenichel_settle_time >= 0.0, "fenichel.settle_time", "settle_time >= 0", c.fenichel_settle_time);
  require(c.fenichel_curve_points >= 2, "fenichel.curve_points", "curve_points >= 2",
          static_cast<double>(c.fenichel_curve_points));

  for (double s : c.sweep.sigma) require(s >= 1.0, "sweep.sigma", "sigma >= 1", s);
  for (double a : c.sweep.alpha) require(a > 0.0, "sweep.alpha", "alpha > 0", a);
  for (double dl : c.sweep.delta) require(dl >= 0.0 && dl <= 1.0, "sweep.delta", "0 <= delta <= 1", dl);
  for (double d : c.sweep.d) require(d > 0.0, "sweep.d", "d > 0", d);
}

ExperimentConfig parse_config(std::string_view text, std::optional<Mode> mode_override) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
  }

  ExperimentConfig c;
  DomainInput dom;
  double sigma = c.params.kernel.sigma();
  bool mode_given = false;
  const auto& table = schema();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("'" + section + "': key outside of a section");
    const auto sec = table.find(section);
    if (sec == table.end()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto setter = sec->second.find(key);
      if (setter == sec->second.end()) throw ConfigError("unknown key '" + full + "'");
      setter->second(c, dom, sigma, full, value.data());
      if (full == "run.mode") mode_given = true;
    }
  }

  if (mode_override) {
    if (mode_given && c.mode != *mode_override) {
      throw ConfigError("run.mode: config says '" + to_string(c.mode) + "' but '" + to_string(*mode_override) +
                        "' was requested");
    }
    c.mode = *mode_override;
  } else if (!mode_given) {
    throw ConfigError("run.mode: mode is required");
  }

  require(sigma >= 1.0, "model.sigma", "sigma >= 1", sigma);
  c.params.kernel = KernelSpec(sigma);
  require(dom.dimension == 1 || dom.dimension == 2, "domain.dimension", "dimension is 1 or 2", dom.dimension);
  c.params.domain = dom.dimension == 1 ? DomainSpec::interval(dom.length, dom.nodes)
                                       : DomainSpec::box(dom.length, dom.length_y, dom.nodes, dom.nodes_y);
  validate(c);
  return c;
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["run"] = {{"mode", to_string(c.mode)}, {"seed", c.seed}};
  j["model"] = {{"sigma", c.params.kernel.sigma()}, {"alpha", c.params.alpha}, {"delta", c.params.delta},
                {"d", c.params.d},  {"alpha_1", c.alpha_1},         {"alpha_2", c.alpha_2}};
  const DomainSpec& dom = c.params.domain;
  j["domain"] = {{"dimension", dom.dimension}, {"length", dom.lengths[0]}, {"length_y", dom.lengths[1]},
                 {"nodes", dom.nodes[0]},         {"nodes_y", dom.nodes[1]}};
  j["init"] = {{"type", to_string(c.init.kind)}, {"u", c.init.u},
               {"v", c.init.v},                  {"p", c.init.p},
               {"amplitude", c.init.amplitude},  {"wavenumber", c.init.wavenumber}};
  j["numerics"] = {{"atol", c.ode.adaptive.atol},
                   {"rtol", c.ode.adaptive.rtol},
                   {"max_step", c.ode.adaptive.max_step},
                   {"t_end", c.t_end},
                   {"output_interval", c.output_interval},
                   {"energy", c.energy},
                   {"stepper", c.pde.stepper == Stepper::ExplicitRk4 ? "rk4" : "ifrk4"},
                   {"cfl_safety", c.pde.cfl_safety},
                   {"dt", c.pde.dt},
                   {"max_dt", c.pde.max_dt},
                   {"record_interval", c.pde.record_interval}};
  j["curve"] = {{"points", c.curve_points},
                {"method", c.curve_method == CurveMethod::RootFind ? "root-find" : "graph-ode"}};
  j["stability"] = {{"equilibrium", c.equilibrium}, {"j_max", c.j_max}};
  j["paradox"] = {{"horizon", c.paradox.horizon},
                  {"theta_points", c.paradox.theta_points},
                  {"theta_min_fraction", c.paradox.theta_min_fraction},
                  {"settle_tolerance", c.paradox.settle_tolerance},
                  {"strict_margin", c.paradox.strict_margin},
                  {"refute_margin", c.paradox.refute_margin},
                  {"sample_spacing", c.paradox.sample_spacing}};
  j["fenichel"] = {{"deltas", c.fenichel_deltas},
                   {"settle_time", c.fenichel_settle_time},
                   {"horizon", c.fenichel_horizon},
                   {"curve_points", c.fenichel_curve_points}};
  j["sweep"] = {{"sigma", c.sweep.sigma}, {"alpha", c.sweep.alpha}, {"delta", c.sweep.delta}, {"d", c.sweep.d}};
  j["output"] = {{"dir", c.output_dir}};
  return j;
}

}  // namespace cscdyn
