#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "adacons/graph.hpp"
#include "adacons/numerics.hpp"
#include "adacons/protocol.hpp"

namespace adacons {

/// Identical linear agents x_i' = A x_i + B (u_i + w_i).
struct AgentModel {
  Matrix a;
  Matrix b;

  int state_dim() const { return static_cast<int>(a.rows()); }
  int input_dim() const { return static_cast<int>(b.cols()); }
  void validate() const;
};

struct ZeroDisturbance {
  bool operator==(const ZeroDisturbance&) const = default;
};
struct SineDisturbance {
  double amplitude = 0.0;
  double angular_frequency = 1.0;
  double phase = 0.0;
  bool operator==(const SineDisturbance&) const = default;
};
struct CosineDisturbance {
  double amplitude = 0.0;
  double angular_frequency = 1.0;
  bool operator==(const CosineDisturbance&) const = default;
};
struct ExpDecayDisturbance {
  double amplitude = 0.0;
  double rate = 0.0;
  bool operator==(const ExpDecayDisturbance&) const = default;
};
/// amplitude * sin(x[source_agent][source_component]); indices zero-based.
struct StateSineDisturbance {
  double amplitude = 0.0;
  int source_agent = 0;
  int source_component = 0;
  bool operator==(const StateSineDisturbance&) const = default;
};

using DisturbanceShape = std::variant<ZeroDisturbance, SineDisturbance, CosineDisturbance,
                                      ExpDecayDisturbance, StateSineDisturbance>;

/// Matched scalar disturbance injected into input channel `channel`.
struct DisturbanceSpec {
  DisturbanceShape shape = ZeroDisturbance{};
  int channel = 0;
  bool operator==(const DisturbanceSpec&) const = default;
};

/// Declared bound upsilon_i = |amplitude|.
double disturbance_bound(const DisturbanceSpec& spec);
/// Sine, cosine and state-sine disturbances with nonzero amplitude.
bool is_persistent(const DisturbanceSpec& spec);

/// Evaluates w_i(t, x) as a p-vector. `x` is the full stacked state of all
/// agents.
Vector eval_disturbance(const DisturbanceSpec& spec, double t, const Eigen::Ref<const Vector>& x,
                        const AgentModel& model);

struct SimSettings {
  double step_h = 1e-3;
  double t_end = 30.0;
  int record_every = 10;
  bool operator==(const SimSettings&) const = default;
};

struct Scenario {
  DirectedGraph graph;
  AgentModel model;
  ProtocolConfig protocol;
  GainDesign design;
  std::vector<DisturbanceSpec> disturbances;  // one per agent
  Vector x0;                                  // N * n
  SimSettings sim;

  Mode mode() const { return mode_of(protocol.variant); }
  int n_agents() const { return graph.n_vertices(); }
  /// Agents carrying an adaptive gain: followers in leader mode, everyone
  /// in leaderless mode.
  std::vector<int> adaptive_agents() const;
  int n_gains() const { return static_cast<int>(adaptive_agents().size()); }

  /// Checks dimensions, graph assumptions for the mode, disturbance indices
  /// and integration settings. Throws ValidationError.
  void validate() const;
};

struct Derivative {
  Vector dx;
  Vector dgains;
};

/// Right-hand side of the coupled agent / adaptive-gain system.
Derivative system_derivative(double t, const Eigen::Ref<const Vector>& x,
                             const Eigen::Ref<const Vector>& gains, const Scenario& s);

struct Trajectory {
  int n_agents = 0;
  int state_dim = 0;
  Mode mode = Mode::Leader;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> gains;
  std::vector<double> err_norms;      // ||xi|| (leader) or ||zeta|| (leaderless)
  std::vector<double> control_norms;  // ||u|| stacked over agents

  std::size_t size() const { return times.size(); }
};

/// Fixed-step classical RK4 over [0, t_end]; records every record_every
/// steps starting at t = 0. Throws DivergenceError on a non-finite state.
Trajectory simulate(const Scenario& s);

/// Supremum of err_norms over the final window_fraction of the time span.
double tail_sup_norm(const Trajectory& traj, double window_fraction);

/// Column names: t, x_i_k..., c_i... (leader) or d_i... (leaderless),
/// err_norm, ctrl_norm.
std::vector<std::string> csv_header(const Trajectory& traj);
/// Comma-separated, 9 significant digits.
void write_csv(const Trajectory& traj, std::ostream& out);
Trajectory read_csv(std::istream& in);

}  // namespace adacons
