#include "adacons/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "adacons/error.hpp"

namespace adacons {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Precomputed per-scenario data shared by every derivative evaluation.
class Dynamics {
 public:
  explicit Dynamics(const Scenario& s)
      : s_(s),
        lap_(laplacian(s.graph)),
        n_agents_(s.n_agents()),
        n_(s.model.state_dim()),
        gain_index_(static_cast<std::size_t>(s.n_agents()), -1) {
    const std::vector<int> adaptive = s.adaptive_agents();
    for (std::size_t k = 0; k < adaptive.size(); ++k) {
      gain_index_[static_cast<std::size_t>(adaptive[k])] = static_cast<int>(k);
    }
  }

  struct Result {
    Vector dx;
    Vector dgains;
    double err_norm = 0.0;
    double control_norm = 0.0;
  };

  Result operator()(double t, const Eigen::Ref<const Vector>& x,
                    const Eigen::Ref<const Vector>& gains) const {
    Result r{Vector(x.size()), Vector(gains.size()), 0.0, 0.0};
    const Eigen::Map<const Matrix> states(x.data(), n_, n_agents_);
    // Column i holds sum_j L_ij x_j = sum_j a_ij (x_i - x_j).
    const Matrix relative = states * lap_.transpose();
    double err_sq = 0.0;
    double ctrl_sq = 0.0;
    for (int i = 0; i < n_agents_; ++i) {
      const int gi = gain_index_[static_cast<std::size_t>(i)];
      Vector u = Vector::Zero(s_.model.input_dim());
      if (gi >= 0) {
        const auto xi = relative.col(i);
        u = control(xi, gains(gi), s_.design);
        r.dgains(gi) = gain_rate(xi, gains(gi), s_.protocol.phi[static_cast<std::size_t>(gi)],
                                 s_.design);
        err_sq += xi.squaredNorm();
        ctrl_sq += u.squaredNorm();
      }
      const Vector w = eval_disturbance(s_.disturbances[static_cast<std::size_t>(i)], t, x, s_.model);
      r.dx.segment(i * n_, n_) = s_.model.a * states.col(i) + s_.model.b * (u + w);
    }
    r.err_norm = std::sqrt(err_sq);
    r.control_norm = std::sqrt(ctrl_sq);
    return r;
  }

  int n_agents() const { return n_agents_; }
  int state_dim() const { return n_; }

  int agent_of_gain(int gain) const {
    for (int i = 0; i < n_agents_; ++i)
      if (gain_index_[static_cast<std::size_t>(i)] == gain) return i;
    return -1;
  }

 private:
  const Scenario& s_;
  Matrix lap_;
  int n_agents_;
  int n_;
  std::vector<int> gain_index_;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string agent_label(int zero_based) { return std::to_string(zero_based + 1); }

}  // namespace

void AgentModel::validate() const {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ValidationError("model: A must be a nonempty square matrix");
  }
  if (b.rows() != a.rows() || b.cols() == 0) {
    throw ValidationError("model: B must have as many rows as A and at least one column");
  }
  numerics::require_finite(a, "model: A");
  numerics::require_finite(b, "model: B");
}

double disturbance_bound(const DisturbanceSpec& spec) {
  return std::visit(overloaded{[](const ZeroDisturbance&) { return 0.0; },
                               [](const auto& d) { return std::abs(d.amplitude); }},
                    spec.shape);
}

bool is_persistent(const DisturbanceSpec& spec) {
  return std::visit(overloaded{[](const ZeroDisturbance&) { return false; },
                               [](const ExpDecayDisturbance&) { return false; },
                               [](const auto& d) { return d.amplitude != 0.0; }},
                    spec.shape);
}

Vector eval_disturbance(const DisturbanceSpec& spec, double t, const Eigen::Ref<const Vector>& x,
                        const AgentModel& model) {
  const int p = model.input_dim();
  const int n = model.state_dim();
  if (spec.channel < 0 || spec.channel >= p) {
    throw ValidationError("disturbance: channel " + std::to_string(spec.channel + 1) +
                          " out of range");
  }
  const double value = std::visit(
      overloaded{
          [](const ZeroDisturbance&) { return 0.0; },
          [t](const SineDisturbance& d) {
            return d.amplitude * std::sin(d.angular_frequency * t + d.phase);
          },
          [t](const CosineDisturbance& d) {
            return d.amplitude * std::cos(d.angular_frequency * t);
          },
          [t](const ExpDecayDisturbance& d) { return d.amplitude * std::exp(-d.rate * t); },
          [&](const StateSineDisturbance& d) {
            if (d.source_component < 0 || d.source_component >= n || d.source_agent < 0 ||
                static_cast<Eigen::Index>(d.source_agent) * n + d.source_component >= x.size()) {
              throw ValidationError("disturbance: state source out of range");
            }
            return d.amplitude * std::sin(x(d.source_agent * n + d.source_component));
          }},
      spec.shape);
  Vector w = Vector::Zero(p);
  w(spec.channel) = value;
  return w;
}

std::vector<int> Scenario::adaptive_agents() const {
  std::vector<int> out;
  for (int i = mode() == Mode::Leader ? 1 : 0; i < n_agents(); ++i) out.push_back(i);
  return out;
}

void Scenario::validate() const {
  model.validate();
  const int n_agents_ = n_agents();
  const int n = model.state_dim();
  const int p = model.input_dim();

  if (mode() == Mode::Leader) {
    if (n_agents_ < 2) throw ValidationError("graph: leader mode needs at least two agents");
    if (!graph.weights().row(0).isZero(0.0)) {
      throw ValidationError(
          "Assumption 2 violated: the leader (vertex 1) has incoming edges");
    }
    if (!contains_spanning_tree(graph, 0)) {
      throw ValidationError(
          "Assumption 2 violated: graph has no directed spanning tree rooted at the leader");
    }
  } else {
    if (n_agents_ < 2) throw ValidationError("graph: leaderless mode needs at least two agents");
    if (!is_strongly_connected(graph)) {
      throw ValidationError("graph: leaderless mode requires a strongly connected graph");
    }
  }

  protocol.validate();
  if (static_cast<int>(protocol.initial_gains.size()) != n_gains()) {
    throw ValidationError("protocol: expected " + std::to_string(n_gains()) +
                          " initial gains, got " + std::to_string(protocol.initial_gains.size()));
  }
  if (design.q.rows() != n || design.k.rows() != p || design.k.cols() != n ||
      design.gamma.rows() != n) {
    throw ValidationError("design: gain matrices do not match the agent model");
  }

  if (static_cast<int>(disturbances.size()) != n_agents_) {
    throw ValidationError("disturbances: expected one entry per agent");
  }
  for (std::size_t i = 0; i < disturbances.size(); ++i) {
    const DisturbanceSpec& d = disturbances[i];
    if (d.channel < 0 || d.channel >= p) {
      throw ValidationError("disturbances: agent " + agent_label(static_cast<int>(i)) +
                            " channel out of range");
    }
    if (const auto* e = std::get_if<ExpDecayDisturbance>(&d.shape); e && !(e->rate >= 0.0)) {
      throw ValidationError("Assumption 1 violated: agent " + agent_label(static_cast<int>(i)) +
                            " exp_decay rate must be nonnegative for a bounded disturbance");
    }
    if (const auto* ss = std::get_if<StateSineDisturbance>(&d.shape)) {
      if (ss->source_agent < 0 || ss->source_agent >= n_agents_ || ss->source_component < 0 ||
          ss->source_component >= n) {
        throw ValidationError("disturbances: agent " + agent_label(static_cast<int>(i)) +
                              " state_sine source out of range");
      }
    }
    if (!std::isfinite(disturbance_bound(d))) {
      throw ValidationError("Assumption 1 violated: disturbance amplitude must be finite");
    }
  }

  if (x0.size() != static_cast<Eigen::Index>(n_agents_) * n) {
    throw ValidationError("sim: x0 has " + std::to_string(x0.size()) + " entries, expected " +
                          std::to_string(n_agents_ * n));
  }
  numerics::require_finite(x0, "sim: x0");
  if (!(sim.step_h > 0.0) || !(sim.t_end > 0.0) || !std::isfinite(sim.t_end)) {
    throw ValidationError("sim: step and t_end must be positive");
  }
  if (sim.record_every < 1) throw ValidationError("sim: record_every must be >= 1");
  const double steps = sim.t_end / sim.step_h;
  if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps)) {
    throw ValidationError("sim: t_end must be an integer multiple of step");
  }
  if (static_cast<long long>(std::llround(steps)) % sim.record_every != 0) {
    throw ValidationError("sim: step count must be a multiple of record_every");
  }
}

Derivative system_derivative(double t, const Eigen::Ref<const Vector>& x,
                             const Eigen::Ref<const Vector>& gains, const Scenario& s) {
  if (x.size() != static_cast<Eigen::Index>(s.n_agents()) * s.model.state_dim() ||
      gains.size() != s.n_gains()) {
    throw ValidationError("system_derivative: state or gain dimension mismatch");
  }
  Dynamics::Result r = Dynamics(s)(t, x, gains);
  return Derivative{std::move(r.dx), std::move(r.dgains)};
}

Trajectory simulate(const Scenario& s) {
  s.validate();
  const Dynamics f(s);
  const double h = s.sim.step_h;
  const long long steps = std::llround(s.sim.t_end / h);

  Trajectory traj;
  traj.n_agents = s.n_agents();
  traj.state_dim = s.model.state_dim();
  traj.mode = s.mode();
  const std::size_t samples = static_cast<std::size_t>(steps / s.sim.record_every) + 1;
  traj.times.reserve(samples);
  traj.states.reserve(samples);
  traj.gains.reserve(samples);
  traj.err_norms.reserve(samples);
  traj.control_norms.reserve(samples);

  Vector x = s.x0;
  Vector c = Eigen::Map<const Vector>(s.protocol.initial_gains.data(),
                                      static_cast<Eigen::Index>(s.protocol.initial_gains.size()));

  const auto record = [&](double t, const Dynamics::Result& at) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.gains.push_back(c);
    traj.err_norms.push_back(at.err_norm);
    traj.control_norms.push_back(at.control_norm);
  };

  Dynamics::Result k1 = f(0.0, x, c);
  record(0.0, k1);
  for (long long step = 1; step <= steps; ++step) {
    const double t = static_cast<double>(step - 1) * h;
    const Dynamics::Result k2 = f(t + 0.5 * h, x + 0.5 * h * k1.dx, c + 0.5 * h * k1.dgains);
    const Dynamics::Result k3 = f(t + 0.5 * h, x + 0.5 * h * k2.dx, c + 0.5 * h * k2.dgains);
    const Dynamics::Result k4 = f(t + h, x + h * k3.dx, c + h * k3.dgains);
    x += (h / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    c += (h / 6.0) * (k1.dgains + 2.0 * k2.dgains + 2.0 * k3.dgains + k4.dgains);

    const double t_next = static_cast<double>(step) * h;
    if (!x.allFinite() || !c.allFinite()) {
      int agent = -1;
      const int n = f.state_dim();
      for (int i = 0; i < f.n_agents() && agent < 0; ++i)
        if (!x.segment(i * n, n).allFinite()) agent = i;
      for (Eigen::Index g = 0; g < c.size() && agent < 0; ++g)
        if (!std::isfinite(c(g))) agent = f.agent_of_gain(static_cast<int>(g));
      throw DivergenceError(t_next, agent,
                            "simulation diverged at t = " + format_double(t_next) + " (agent " +
                                agent_label(agent) + " has a non-finite state)");
    }
    k1 = f(t_next, x, c);
    if (step % s.sim.record_every == 0) record(t_next, k1);
  }
  return traj;
}

double tail_sup_norm(const Trajectory& traj, double window_fraction) {
  if (traj.size() == 0) throw ValidationError("tail_sup_norm: empty trajectory");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw ValidationError("tail_sup_norm: window fraction must lie in (0, 1]");
  }
  const double t0 = traj.times.front();
  const double t1 = traj.times.back();
  const double start = t1 - window_fraction * (t1 - t0);
  const double slack = 1e-9 * std::max(1.0, std::abs(t1));
  double sup = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.times[k] >= start - slack) sup = std::max(sup, traj.err_norms[k]);
  }
  return sup;
}

std::vector<std::string> csv_header(const Trajectory& traj) {
  std::vector<std::string> cols{"t"};
  for (int i = 0; i < traj.n_agents; ++i)
    for (int k = 0; k < traj.state_dim; ++k)
      cols.push_back("x_" + agent_label(i) + "_" + std::to_string(k + 1));
  const char prefix = traj.mode == Mode::Leader ? 'c' : 'd';
  for (int i = traj.mode == Mode::Leader ? 1 : 0; i < traj.n_agents; ++i)
    cols.push_back(std::string(1, prefix) + "_" + agent_label(i));
  cols.emplace_back("err_norm");
  cols.emplace_back("ctrl_norm");
  return cols;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  const std::vector<std::string> header = csv_header(traj);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_double(traj.times[k]);
    for (Eigen::Index j = 0; j < traj.states[k].size(); ++j)
      out << ',' << format_double(traj.states[k](j));
    for (Eigen::Index j = 0; j < traj.gains[k].size(); ++j)
      out << ',' << format_double(traj.gains[k](j));
    out << ',' << format_double(traj.err_norms[k]) << ',' << format_double(traj.control_norms[k])
        << '\n';
  }
}

Trajectory read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv: missing header");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) header.push_back(col);
  }
  Trajectory traj;
  int gain_cols = 0;
  bool leaderless = false;
  for (const std::string& col : header) {
    if (col.rfind("x_", 0) == 0) {
      const std::size_t sep = col.find('_', 2);
      if (sep == std::string::npos) throw ValidationError("csv: bad state column '" + col + "'");
      traj.n_agents = std::max(traj.n_agents, std::stoi(col.substr(2, sep - 2)));
      traj.state_dim = std::max(traj.state_dim, std::stoi(col.substr(sep + 1)));
    } else if (col.rfind("c_", 0) == 0 || col.rfind("d_", 0) == 0) {
      ++gain_cols;
      leaderless = col[0] == 'd';
    }
  }
  traj.mode = leaderless ? Mode::Leaderless : Mode::Leader;
  const std::size_t expected = 1 + static_cast<std::size_t>(traj.n_agents * traj.state_dim) +
                               static_cast<std::size_t>(gain_cols) + 2;
  if (header.size() != expected || header.front() != "t") {
    throw ValidationError("csv: header has " + std::to_string(header.size()) +
                          " columns, expected " + std::to_string(expected));
  }
  const int nx = traj.n_agents * traj.state_dim;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != expected) throw ValidationError("csv: row has the wrong column count");
    traj.times.push_back(row[0]);
    traj.states.emplace_back(Eigen::Map<const Vector>(row.data() + 1, nx));
    traj.gains.emplace_back(Eigen::Map<const Vector>(row.data() + 1 + nx, gain_cols));
    traj.err_norms.push_back(row[expected - 2]);
    traj.control_norms.push_back(row[expected - 1]);
  }
  return traj;
}

}  // namespace adacons
