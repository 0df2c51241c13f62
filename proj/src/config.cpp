#include "avalanche/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace avalanche {

void RunConfig::validate() const {
  scenario.validate();
  step.validate();
  if (adapt) adapt_config.validate();
  if (mesh_file.empty() && (nx < 1 || ny < 1)) throw ConfigError("nx and ny must be >= 1");
  if (!(output_interval >= 0.0)) throw ConfigError("output_interval must be non-negative");
  if (profile && profile->samples < 2) throw ConfigError("profile needs at least 2 samples");
  if (output_dir.empty()) throw ConfigError("output directory must not be empty");
}

RunConfig default_run_config(const std::string& scenario) {
  RunConfig c;
  if (scenario == "dam_break") {
    c.scenario = dam_break_scenario();
    c.nx = 256;
    c.ny = 32;
    c.step.t_end = 0.5;
    c.output_interval = 0.1;
    c.profile = ProfileLine{{-12.8, 0.0}, {12.8, 0.0}, 512};
  } else if (scenario == "chute" || scenario == "obstacle") {
    c.scenario = scenario == "chute" ? chute_scenario() : obstacle_scenario();
    c.nx = 120;
    c.ny = 56;
    c.step.t_end = 24.0;
    c.output_interval = 3.0;
    c.profile = ProfileLine{{0.0, 0.0}, {30.0, 0.0}, 600};
  } else if (scenario == "rest") {
    c.scenario = rest_scenario();
    c.nx = 8;
    c.ny = 8;
    c.step.t_end = 1.0;
    c.output_interval = 0.5;
  } else {
    throw ConfigError("unknown scenario '" + scenario + "'");
  }
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  double d = 0.0;
  std::string rest;
  if (!(in >> d) || (in >> rest)) throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  return d;
}

int to_int(const std::string& key, const std::string& value) {
  const double d = to_double(key, value);
  if (d != static_cast<int>(d)) throw ConfigError("'" + key + "' expects an integer");
  return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1" || value == "yes") return true;
  if (value == "off" || value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("'" + key + "' expects on/off, got '" + value + "'");
}

BoundaryRule to_rule(const std::string& key, const std::string& value) {
  if (value == "outflow") return BoundaryRule::Outflow;
  if (value == "wall") return BoundaryRule::Wall;
  throw ConfigError("'" + key + "' expects outflow or wall, got '" + value + "'");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <typename Alt>
Alt& alternative(auto& variant, const std::string& key) {
  if (auto* a = std::get_if<Alt>(&variant)) return *a;
  throw ConfigError("'" + key + "' does not apply to this scenario");
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"x_min", [](RunConfig& c, auto& k, auto& v) { c.scenario.x.lo = to_double(k, v); }},
      {"x_max", [](RunConfig& c, auto& k, auto& v) { c.scenario.x.hi = to_double(k, v); }},
      {"y_min", [](RunConfig& c, auto& k, auto& v) { c.scenario.y.lo = to_double(k, v); }},
      {"y_max", [](RunConfig& c, auto& k, auto& v) { c.scenario.y.hi = to_double(k, v); }},
      {"nx", [](RunConfig& c, auto& k, auto& v) { c.nx = to_int(k, v); }},
      {"ny", [](RunConfig& c, auto& k, auto& v) { c.ny = to_int(k, v); }},
      {"mesh_file", [](RunConfig& c, auto&, auto& v) { c.mesh_file = v; }},
      {"phi_deg", [](RunConfig& c, auto& k, auto& v) { c.scenario.params.phi = deg_to_rad(to_double(k, v)); }},
      {"delta_deg",
       [](RunConfig& c, auto& k, auto& v) { c.scenario.params.delta = deg_to_rad(to_double(k, v)); }},
      {"epsilon", [](RunConfig& c, auto& k, auto& v) { c.scenario.params.epsilon = to_double(k, v); }},
      {"lambda", [](RunConfig& c, auto& k, auto& v) { c.scenario.params.lambda = to_double(k, v); }},
      {"gravity", [](RunConfig& c, auto& k, auto& v) { c.scenario.params.gravity = to_double(k, v); }},
      {"h_dry", [](RunConfig& c, auto& k, auto& v) { c.scenario.params.h_dry = to_double(k, v); }},
      {"h_thin", [](RunConfig& c, auto& k, auto& v) { c.scenario.params.h_thin = to_double(k, v); }},
      {"u_reg", [](RunConfig& c, auto& k, auto& v) { c.scenario.params.u_reg = to_double(k, v); }},
      {"pressure",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "mohr_coulomb") {
           c.scenario.params.pressure = PressureMode::MohrCoulomb;
         } else if (v == "constant") {
           c.scenario.params.pressure = PressureMode::Constant;
         } else {
           throw ConfigError("'" + k + "' expects mohr_coulomb or constant");
         }
       }},
      {"constant_k", [](RunConfig& c, auto& k, auto& v) { c.scenario.params.constant_k = to_double(k, v); }},
      {"zeta_deg",
       [](RunConfig& c, auto& k, auto& v) {
         const double z = deg_to_rad(to_double(k, v));
         if (auto* ch = std::get_if<ChuteInclination>(&c.scenario.inclination)) {
           ch->zeta0 = z;
         } else {
           std::get<ConstantInclination>(c.scenario.inclination).zeta = z;
         }
       }},
      {"x_incline_end",
       [](RunConfig& c, auto& k, auto& v) {
         alternative<ChuteInclination>(c.scenario.inclination, k).x_incline_end = to_double(k, v);
       }},
      {"x_horizontal_start",
       [](RunConfig& c, auto& k, auto& v) {
         alternative<ChuteInclination>(c.scenario.inclination, k).x_horizontal_start = to_double(k, v);
       }},
      {"h0",
       [](RunConfig& c, auto& k, auto& v) {
         if (auto* d = std::get_if<DamBreakInitial>(&c.scenario.initial)) {
           d->h0 = to_double(k, v);
         } else {
           alternative<UniformInitial>(c.scenario.initial, k).state.h = to_double(k, v);
         }
       }},
      {"cap_x", [](RunConfig& c, auto& k, auto& v) { alternative<CapInitial>(c.scenario.initial, k).center.x = to_double(k, v); }},
      {"cap_y", [](RunConfig& c, auto& k, auto& v) { alternative<CapInitial>(c.scenario.initial, k).center.y = to_double(k, v); }},
      {"cap_r0", [](RunConfig& c, auto& k, auto& v) { alternative<CapInitial>(c.scenario.initial, k).r0 = to_double(k, v); }},
      {"cone_x", [](RunConfig& c, auto& k, auto& v) { alternative<ConeTopography>(c.scenario.topography, k).center.x = to_double(k, v); }},
      {"cone_y", [](RunConfig& c, auto& k, auto& v) { alternative<ConeTopography>(c.scenario.topography, k).center.y = to_double(k, v); }},
      {"cone_radius", [](RunConfig& c, auto& k, auto& v) { alternative<ConeTopography>(c.scenario.topography, k).radius = to_double(k, v); }},
      {"cone_height", [](RunConfig& c, auto& k, auto& v) { alternative<ConeTopography>(c.scenario.topography, k).height = to_double(k, v); }},
      {"boundary_x", [](RunConfig& c, auto& k, auto& v) { c.scenario.boundaries.x = to_rule(k, v); }},
      {"boundary_y", [](RunConfig& c, auto& k, auto& v) { c.scenario.boundaries.y = to_rule(k, v); }},
      {"cr", [](RunConfig& c, auto& k, auto& v) { c.step.cr = to_double(k, v); }},
      {"t_end", [](RunConfig& c, auto& k, auto& v) { c.step.t_end = to_double(k, v); }},
      {"max_steps",
       [](RunConfig& c, auto& k, auto& v) { c.step.max_steps = static_cast<std::size_t>(to_int(k, v)); }},
      {"dt_floor", [](RunConfig& c, auto& k, auto& v) { c.step.dt_floor = to_double(k, v); }},
      {"adapt", [](RunConfig& c, auto& k, auto& v) { c.adapt = to_bool(k, v); }},
      {"refine_fraction", [](RunConfig& c, auto& k, auto& v) { c.adapt_config.refine_fraction = to_double(k, v); }},
      {"coarsen_fraction", [](RunConfig& c, auto& k, auto& v) { c.adapt_config.coarsen_fraction = to_double(k, v); }},
      {"max_level", [](RunConfig& c, auto& k, auto& v) { c.adapt_config.max_level = to_int(k, v); }},
      {"min_level", [](RunConfig& c, auto& k, auto& v) { c.adapt_config.min_level = to_int(k, v); }},
      {"adapt_interval", [](RunConfig& c, auto& k, auto& v) { c.adapt_config.adapt_interval = to_int(k, v); }},
      {"output_interval", [](RunConfig& c, auto& k, auto& v) { c.output_interval = to_double(k, v); }},
      {"output_dir", [](RunConfig& c, auto&, auto& v) { c.output_dir = v; }},
      {"formats",
       [](RunConfig& c, auto& k, auto& v) {
         c.write_vtk = c.write_csv = false;
         std::istringstream in(v);
         std::string f;
         while (std::getline(in, f, ',')) {
           f = trim(f);
           if (f == "vtk") {
             c.write_vtk = true;
           } else if (f == "csv") {
             c.write_csv = true;
           } else {
             throw ConfigError("'" + k + "' has unknown format '" + f + "'");
           }
         }
       }},
      {"profile",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "none") {
           c.profile.reset();
           return;
         }
         std::istringstream in(v);
         ProfileLine p;
         std::string rest;
         if (!(in >> p.start.x >> p.start.y >> p.end.x >> p.end.y >> p.samples) || (in >> rest)) {
           throw ConfigError("'" + k + "' expects 'x0 y0 x1 y1 n'");
         }
         if (p.start.x != p.end.x && p.start.y != p.end.y) {
           throw ConfigError("profile line must be axis-aligned");
         }
         c.profile = p;
       }},
  };
  return table;
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  std::optional<RunConfig> config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "scenario") {
      if (config) throw ConfigError("line " + std::to_string(line_no) + ": scenario given twice");
      config = default_run_config(value);
      continue;
    }
    if (!config) throw ConfigError("line " + std::to_string(line_no) + ": 'scenario' must come first");
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    it->second(*config, key, value);
  }
  if (!config) throw ConfigError("configuration has no 'scenario' key");
  config->validate();
  return *config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  return parse_run_config(in);
}

}  // namespace avalanche
