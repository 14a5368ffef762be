#pragma once

#include <optional>
#include <string>

#include "adacons/bounds.hpp"
#include "adacons/graph.hpp"
#include "adacons/protocol.hpp"
#include "adacons/scenario_file.hpp"
#include "adacons/sim.hpp"
#include "json.hpp"

namespace adacons {

/// Growth thresholds used by the drift verdicts.
inline constexpr double kDriftGrowth = 0.05;
inline constexpr double kSettledGrowth = 0.01;

struct TrajectorySummary {
  std::size_t samples = 0;
  double t_end = 0.0;
  double final_err_norm = 0.0;
  double tail_sup_norm = 0.0;
  double gain_min = 0.0;
  double gain_max = 0.0;
  double final_gain_max = 0.0;
  double max_control_norm = 0.0;
};

TrajectorySummary summarize(const Trajectory& traj, double window_fraction);

struct RunReport {
  std::string scenario_path;
  Variant variant = Variant::LeaderRobust;
  int n_agents = 0;
  int state_dim = 0;
  int input_dim = 0;
  GainDesign design;
  std::optional<LeaderConstants> leader_constants;
  std::optional<StrongConstants> strong_constants;
  std::optional<LeaderBound> leader_bound;
  std::optional<LeaderlessBound> leaderless_bound;
  std::vector<double> upsilon;
  double window_fraction = 0.5;

  std::optional<TrajectorySummary> trajectory;
  std::optional<ContainmentReport> containment;
  double wall_seconds = 0.0;

  /// Radius of the applicable residual set, if any.
  std::optional<double> radius_sq() const;
};

/// Design echo, graph constants and (for robust variants) residual-set
/// constants, without simulating.
RunReport analyze(const Scenario& s, const ScenarioConfig& cfg);

/// Adds the trajectory summary and, when a bound applies, the containment
/// check.
void attach_trajectory(RunReport& report, const Trajectory& traj);

/// Non-finite numbers become null.
nlohmann::json to_json(const RunReport& report);
std::string to_text(const RunReport& report);

/// Gain statistics over the final half of a run.
struct DriftStats {
  double mid_time = 0.0;
  double cmax_mid = 0.0;
  double cmax_end = 0.0;
  double growth = 0.0;      // cmax_end - cmax_mid
  double max_abs_change = 0.0;  // max_i |c_i(end) - c_i(mid)|
  bool nondecreasing = false;   // every gain, sample to sample, within 1e-12
  std::string verdict;          // "growing", "weak" or "settled"
};

DriftStats drift_stats(const Trajectory& traj);

}  // namespace adacons
