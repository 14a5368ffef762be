#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adacons/graph.hpp"
#include "adacons/protocol.hpp"
#include "adacons/sim.hpp"

namespace adacons {

/// Parsed but not yet realized contents of a scenario file. Vertex and
/// agent indices are zero-based here and one-based in the file.
///
/// File grammar (comments start with '#'):
///
///   [section]
///   key = value
///   value := number | true | false | word | "string"
///          | '[' value, ... ']' | word '(' key = value, ... ')'
///
/// Lists and calls may span lines.
struct ScenarioConfig {
  // [model]
  Matrix a;
  Matrix b;

  // [graph]
  int vertices = 0;
  Mode mode = Mode::Leader;
  int leader = 0;
  std::vector<Edge> edges;

  // [protocol]
  Variant variant = Variant::LeaderRobust;
  std::vector<double> phi;  // one entry broadcasts
  std::vector<double> initial_gains;
  std::optional<std::uint64_t> gain_seed;
  double gain_low = 1.0;
  double gain_high = 3.0;

  // [disturbances]
  std::vector<DisturbanceSpec> disturbances;  // one per vertex

  // [sim]
  std::vector<double> x0;
  std::optional<std::uint64_t> state_seed;
  double state_range = 1.0;
  SimSettings sim;

  // [output]
  std::string csv = "trajectory.csv";
  std::string report = "report.txt";
  std::string summary = "summary.json";
  bool plots = true;

  // [bounds]
  double window_fraction = 0.5;
  std::optional<double> leaderless_offset;  // empty means (beta - 1)^2

  bool operator==(const ScenarioConfig& other) const;
};

/// Throws ValidationError naming the section and key at fault.
ScenarioConfig parse_scenario_config(const std::string& text);
ScenarioConfig load_scenario_config(const std::string& path);

/// Inverse of parse_scenario_config; doubles are written with 17
/// significant digits so the round trip is exact.
std::string write_scenario_config(const ScenarioConfig& cfg);

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;  // replaces both gain_seed and state_seed
  std::optional<double> step;
};

/// Draws seeded initial gains/states, designs the gains from the ARE and
/// validates the result.
Scenario build_scenario(const ScenarioConfig& cfg, const ScenarioOverrides& overrides = {});

/// load + build.
Scenario parse_scenario(const std::string& path, const ScenarioOverrides& overrides = {});

}  // namespace adacons
