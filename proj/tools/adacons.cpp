#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "adacons/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive consensus simulation and residual-set verification"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<double> step;
  app.add_option("--seed", seed, "Override the gain and state seeds")->type_name("U64");
  app.add_option("--step", step, "Override the integration step h")
      ->check(CLI::PositiveNumber);

  std::string scenario;
  std::string out_dir = ".";

  auto* run = app.add_subcommand("run", "Simulate a scenario and write CSV, report and plots");
  run->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");

  auto* bounds = app.add_subcommand("bounds", "Print design and residual-set constants");
  bounds->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);

  auto* drift = app.add_subcommand("drift-demo", "Compare robust and phi = 0 gain growth");
  drift->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  drift->add_option("--out", out_dir, "Output directory");

  for (auto* sub : {run, bounds, drift}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : adacons::kExitUsage;
  }

  const adacons::ScenarioOverrides overrides{seed, step};
  if (run->parsed()) return adacons::cmd_run(scenario, out_dir, overrides, std::cout, std::cerr);
  if (bounds->parsed()) return adacons::cmd_bounds(scenario, overrides, std::cout, std::cerr);
  return adacons::cmd_drift_demo(scenario, out_dir, overrides, std::cout, std::cerr);
}
