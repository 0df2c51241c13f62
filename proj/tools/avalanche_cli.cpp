#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "avalanche/config.hpp"
#include "avalanche/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume solver for depth-averaged granular avalanches"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a simulation from a configuration file");
  std::string config_path;
  std::optional<std::string> out_dir;
  bool no_adapt = false;
  std::optional<double> t_end;
  std::optional<double> write_interval;
  run->add_option("config", config_path, "Configuration file (key = value)")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--no-adapt", no_adapt, "Disable mesh adaptivity");
  run->add_option("--t-end", t_end, "Final simulated time");
  run->add_option("--write-interval", write_interval, "Simulated time between frames");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : avalanche::kConfigError;
  }

  avalanche::RunConfig config;
  try {
    config = avalanche::load_run_config(config_path);
    if (out_dir) config.output_dir = *out_dir;
    if (no_adapt) config.adapt = false;
    if (t_end) config.step.t_end = *t_end;
    if (write_interval) config.output_interval = *write_interval;
    config.validate();
  } catch (const avalanche::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return avalanche::kConfigError;
  }
  return avalanche::run_main(config, std::cerr);
}
