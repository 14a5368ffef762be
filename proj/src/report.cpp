#include "adacons/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "adacons/error.hpp"

namespace adacons {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(number(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::Ref<const Vector>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string row_text(const Eigen::Ref<const Matrix>& m) {
  std::string s = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    s += r ? "; " : "";
    for (Eigen::Index c = 0; c < m.cols(); ++c) s += (c ? ", " : "") + g(m(r, c));
  }
  return s + "]";
}

std::string vec_text(const Eigen::Ref<const Vector>& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + g(v(i));
  return s + "]";
}

std::size_t index_near(const Trajectory& traj, double t) {
  std::size_t best = 0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (std::abs(traj.times[k] - t) < std::abs(traj.times[best] - t)) best = k;
  }
  return best;
}

}  // namespace

TrajectorySummary summarize(const Trajectory& traj, double window_fraction) {
  if (traj.size() == 0) throw ValidationError("summarize: empty trajectory");
  TrajectorySummary s;
  s.samples = traj.size();
  s.t_end = traj.times.back();
  s.final_err_norm = traj.err_norms.back();
  s.tail_sup_norm = tail_sup_norm(traj, window_fraction);
  s.gain_min = std::numeric_limits<double>::infinity();
  s.gain_max = -s.gain_min;
  for (const Vector& c : traj.gains) {
    s.gain_min = std::min(s.gain_min, c.minCoeff());
    s.gain_max = std::max(s.gain_max, c.maxCoeff());
  }
  s.final_gain_max = traj.gains.back().maxCoeff();
  s.max_control_norm = *std::max_element(traj.control_norms.begin(), traj.control_norms.end());
  return s;
}

std::optional<double> RunReport::radius_sq() const {
  if (leader_bound && leader_bound->applicable) return leader_bound->radius_sq;
  if (leaderless_bound && leaderless_bound->applicable) return leaderless_bound->radius_sq;
  return std::nullopt;
}

RunReport analyze(const Scenario& s, const ScenarioConfig& cfg) {
  RunReport r;
  r.variant = s.protocol.variant;
  r.n_agents = s.n_agents();
  r.state_dim = s.model.state_dim();
  r.input_dim = s.model.input_dim();
  r.design = s.design;
  r.window_fraction = cfg.window_fraction;
  for (const DisturbanceSpec& d : s.disturbances) r.upsilon.push_back(disturbance_bound(d));

  const Matrix lap = laplacian(s.graph);
  if (s.mode() == Mode::Leader) {
    r.leader_constants = leader_constants(partition_leader(lap));
    if (is_robust(s.protocol.variant)) {
      r.leader_bound = leader_bound(*r.leader_constants, s.design, s.protocol.phi, r.upsilon);
    }
  } else {
    r.strong_constants = strong_constants(lap);
    if (is_robust(s.protocol.variant)) {
      r.leaderless_bound = leaderless_bound(*r.strong_constants, s.design, s.protocol.phi,
                                            r.upsilon, cfg.leaderless_offset);
    }
  }
  return r;
}

void attach_trajectory(RunReport& report, const Trajectory& traj) {
  report.trajectory = summarize(traj, report.window_fraction);
  if (report.leader_bound && report.leader_bound->applicable) {
    report.containment = check_containment(traj, *report.leader_bound, report.window_fraction);
  } else if (report.leaderless_bound && report.leaderless_bound->applicable) {
    report.containment = check_containment(traj, *report.leaderless_bound, report.window_fraction);
  }
}

nlohmann::json to_json(const RunReport& r) {
  json j;
  j["scenario"] = r.scenario_path;
  j["variant"] = std::string(to_string(r.variant));
  j["agents"] = r.n_agents;
  j["state_dim"] = r.state_dim;
  j["input_dim"] = r.input_dim;
  j["design"] = {{"Q", matrix_json(r.design.q)},
                 {"K", matrix_json(r.design.k)},
                 {"Gamma", matrix_json(r.design.gamma)},
                 {"tau", number(r.design.tau)},
                 {"are_residual", number(r.design.are_residual)}};
  j["upsilon"] = r.upsilon;
  if (r.leader_constants) {
    j["graph"] = {{"q", vector_json(r.leader_constants->q)},
                  {"lambda_hat0", number(r.leader_constants->lambda_hat0)}};
  }
  if (r.strong_constants) {
    j["graph"] = {{"r", vector_json(r.strong_constants->r)},
                  {"lambda2_hat", number(r.strong_constants->lambda2_hat)}};
  }
  if (r.leader_bound) {
    const LeaderBound& b = *r.leader_bound;
    j["bound"] = {{"kind", "leader"},          {"delta", number(b.delta)},
                  {"tau", number(b.tau)},          {"alpha", number(b.alpha)},
                  {"Pi", number(b.pi)},            {"Pi_adaptive", number(b.pi_adaptive)},
                  {"Pi_disturbance", number(b.pi_disturbance)},
                  {"sigma_max_GL1", number(b.sigma_gl1)},
                  {"radius_sq", number(b.radius_sq)}, {"applicable", b.applicable}};
  }
  if (r.leaderless_bound) {
    const LeaderlessBound& b = *r.leaderless_bound;
    j["bound"] = {{"kind", "leaderless"},       {"epsilon", number(b.epsilon)},
                  {"tau", number(b.tau)},           {"beta", number(b.beta)},
                  {"offset", number(b.offset)},     {"Xi", number(b.xi)},
                  {"Xi_adaptive", number(b.xi_adaptive)},
                  {"Xi_disturbance", number(b.xi_disturbance)},
                  {"sigma_max_RL", number(b.sigma_rl)},
                  {"radius_sq", number(b.radius_sq)}, {"applicable", b.applicable}};
  }
  j["window_fraction"] = r.window_fraction;
  if (r.trajectory) {
    const TrajectorySummary& t = *r.trajectory;
    j["trajectory"] = {{"samples", t.samples},
                       {"t_end", number(t.t_end)},
                       {"final_err_norm", number(t.final_err_norm)},
                       {"tail_sup_norm", number(t.tail_sup_norm)},
                       {"gain_min", number(t.gain_min)},
                       {"gain_max", number(t.gain_max)},
                       {"final_gain_max", number(t.final_gain_max)},
                       {"max_control_norm", number(t.max_control_norm)}};
  }
  if (r.containment) {
    j["containment"] = {{"observed_sq", number(r.containment->observed_sq)},
                        {"bound_sq", number(r.containment->bound_sq)},
                        {"contained", r.containment->contained},
                        {"slack_ratio", number(r.containment->slack_ratio)}};
  }
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

std::string to_text(const RunReport& r) {
  std::ostringstream o;
  o << "== scenario ==\n";
  if (!r.scenario_path.empty()) o << "file        " << r.scenario_path << "\n";
  o << "variant     " << to_string(r.variant) << "\n"
    << "agents      " << r.n_agents << " (state dim " << r.state_dim << ", input dim "
    << r.input_dim << ")\n";

  o << "== design ==\n"
    << "Q           " << row_text(r.design.q) << "\n"
    << "K           " << row_text(r.design.k) << "\n"
    << "Gamma       " << row_text(r.design.gamma) << "\n"
    << "tau         " << g(r.design.tau) << "\n"
    << "ARE resid.  " << g(r.design.are_residual) << "\n";

  o << "== graph ==\n";
  if (r.leader_constants) {
    o << "q           " << vec_text(r.leader_constants->q) << "\n"
      << "lambda_hat0 " << g(r.leader_constants->lambda_hat0) << "\n";
  }
  if (r.strong_constants) {
    o << "r           " << vec_text(r.strong_constants->r) << "\n"
      << "lambda2_hat " << g(r.strong_constants->lambda2_hat) << "\n";
  }

  if (r.leader_bound) {
    const LeaderBound& b = *r.leader_bound;
    o << "== residual set D1 ==\n"
      << "delta       " << g(b.delta) << "\n"
      << "tau         " << g(b.tau) << "\n"
      << "alpha       " << g(b.alpha) << "\n"
      << "Pi          " << g(b.pi) << " (adaptive " << g(b.pi_adaptive) << ", disturbance "
      << g(b.pi_disturbance) << ")\n";
    if (b.applicable) {
      o << "radius_sq   " << g(b.radius_sq) << "\n";
    } else {
      o << "verdict     inapplicable: delta >= tau\n";
    }
  }
  if (r.leaderless_bound) {
    const LeaderlessBound& b = *r.leaderless_bound;
    o << "== residual set D2 ==\n"
      << "epsilon     " << g(b.epsilon) << "\n"
      << "tau         " << g(b.tau) << "\n"
      << "beta        " << g(b.beta) << "\n"
      << "offset      " << g(b.offset) << "\n"
      << "Xi          " << g(b.xi) << " (adaptive " << g(b.xi_adaptive) << ", disturbance "
      << g(b.xi_disturbance) << ")\n";
    if (b.applicable) {
      o << "radius_sq   " << g(b.radius_sq) << "\n";
    } else {
      o << "verdict     inapplicable: epsilon >= tau\n";
    }
  }

  if (r.trajectory) {
    const TrajectorySummary& t = *r.trajectory;
    o << "== trajectory ==\n"
      << "samples     " << t.samples << " up to t = " << g(t.t_end) << "\n"
      << "final err   " << g(t.final_err_norm) << "\n"
      << "tail sup    " << g(t.tail_sup_norm) << " (final " << g(r.window_fraction * 100.0)
      << "% of horizon)\n"
      << "gains       min " << g(t.gain_min) << ", max " << g(t.gain_max) << ", final max "
      << g(t.final_gain_max) << "\n";
  }
  if (r.containment) {
    const ContainmentReport& c = *r.containment;
    o << "== containment ==\n"
      << "observed_sq " << g(c.observed_sq) << "\n"
      << "bound_sq    " << g(c.bound_sq) << "\n"
      << "contained   " << (c.contained ? "yes" : "NO") << "\n"
      << "slack ratio " << g(c.slack_ratio) << "\n";
  }
  if (r.wall_seconds > 0.0) o << "wall time   " << g(r.wall_seconds) << " s\n";
  return o.str();
}

DriftStats drift_stats(const Trajectory& traj) {
  if (traj.size() < 2) throw ValidationError("drift_stats: need at least two samples");
  DriftStats d;
  const double t0 = traj.times.front();
  const double t1 = traj.times.back();
  const std::size_t mid = index_near(traj, 0.5 * (t0 + t1));
  d.mid_time = traj.times[mid];
  d.cmax_mid = traj.gains[mid].maxCoeff();
  d.cmax_end = traj.gains.back().maxCoeff();
  d.growth = d.cmax_end - d.cmax_mid;
  d.max_abs_change = (traj.gains.back() - traj.gains[mid]).cwiseAbs().maxCoeff();
  d.nondecreasing = true;
  for (std::size_t k = 1; k < traj.size() && d.nondecreasing; ++k) {
    d.nondecreasing = ((traj.gains[k] - traj.gains[k - 1]).array() >= -1e-12).all();
  }
  d.verdict = d.growth >= kDriftGrowth ? "growing" : d.growth < kSettledGrowth ? "settled" : "weak";
  return d;
}

}  // namespace adacons
