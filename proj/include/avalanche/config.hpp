#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "avalanche/adaptivity.hpp"
#include "avalanche/scenarios.hpp"
#include "avalanche/timestepper.hpp"

namespace avalanche {

/// Axis-aligned sampling line for 1D profiles.
struct ProfileLine {
  Vec2 start;
  Vec2 end;
  int samples = 200;
};

/// Everything one batch run needs, read from a `key = value` file.
struct RunConfig {
  ScenarioSpec scenario;
  int nx = 0;
  int ny = 0;
  std::string mesh_file;  // overrides nx/ny when set
  StepConfig step;
  bool adapt = false;
  AdaptConfig adapt_config;
  double output_interval = 0.0;  // 0: only the initial and final frames
  bool write_vtk = true;
  bool write_csv = true;
  std::optional<ProfileLine> profile;
  std::string output_dir = "output";

  void validate() const;
};

/// Defaults of a named scenario: dam_break, chute, obstacle or rest.
RunConfig default_run_config(const std::string& scenario);

/// Parses the configuration text. The `scenario` key selects the defaults
/// and must come first; every other key overrides one field. Unknown keys
/// and malformed values raise ConfigError.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

}  // namespace avalanche
