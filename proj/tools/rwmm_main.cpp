#include "rwmm/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Discrete and continuous random waypoint mobility: simulation and ergodicity checks"};
  app.require_subcommand(1);

  rwmm::CommandOptions options;
  std::string config;
  std::string out;
  const char* commands[][2] = {
      {"simulate-discrete", "Simulate the discrete model and write location and path traces"},
      {"simulate-continuous", "Simulate the continuous model and the CBR traffic proxy"},
      {"verify-channel", "Exact stationarity, normalization and output-mixing checks"},
      {"analyze", "Time averages, cross-seed constancy and Cesaro estimates"},
      {"export", "Write ns-2 setdest movement files"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", options.seeds, "Seed list (overrides the config)")->delimiter(',');
    sub->add_option("--out", out, "Output directory (overrides the config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rwmm::kExitConfigError;
  }
  options.config = config;
  options.out = out;
  return rwmm::run_command(app.get_subcommands().front()->get_name(), options, std::cout, std::cerr);
}
