#include "adacons/protocol.hpp"

#include <cmath>
#include <string>

#include "adacons/error.hpp"

namespace adacons {

GainDesign design_gains(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b,
                        const numerics::AreOptions& options) {
  const numerics::AreSolution are = numerics::solve_are(a, b, options);
  GainDesign d;
  d.q = are.q;
  d.k = -b.transpose() * are.q;
  d.gamma = d.k.transpose() * d.k;
  d.tau = 1.0 / numerics::lambda_max(are.q);
  d.are_residual = are.residual_norm;
  return d;
}

Mode mode_of(Variant v) {
  return v == Variant::LeaderRobust || v == Variant::LeaderNonRobust ? Mode::Leader
                                                                     : Mode::Leaderless;
}

bool is_robust(Variant v) { return v == Variant::LeaderRobust || v == Variant::LeaderlessRobust; }

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::LeaderRobust: return "leader_robust";
    case Variant::LeaderNonRobust: return "leader_nonrobust";
    case Variant::LeaderlessRobust: return "leaderless_robust";
    case Variant::LeaderlessNonRobust: return "leaderless_nonrobust";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::LeaderRobust, Variant::LeaderNonRobust, Variant::LeaderlessRobust,
                    Variant::LeaderlessNonRobust}) {
    if (to_string(v) == name) return v;
  }
  throw ValidationError("unknown protocol variant '" + std::string(name) + "'");
}

ProtocolConfig ProtocolConfig::make(Variant variant, std::vector<double> phi,
                                    std::vector<double> initial_gains) {
  ProtocolConfig cfg{variant, std::move(phi), std::move(initial_gains)};
  if (!is_robust(variant)) cfg.phi.assign(cfg.initial_gains.size(), 0.0);
  cfg.validate();
  return cfg;
}

void ProtocolConfig::validate() const {
  if (phi.size() != initial_gains.size()) {
    throw ValidationError("protocol: phi has " + std::to_string(phi.size()) +
                          " entries but there are " + std::to_string(initial_gains.size()) +
                          " adaptive gains");
  }
  for (std::size_t i = 0; i < initial_gains.size(); ++i) {
    if (!(initial_gains[i] >= 1.0) || !std::isfinite(initial_gains[i])) {
      throw ValidationError("protocol: initial gains must be finite and >= 1");
    }
    if (!(phi[i] >= 0.0) || !std::isfinite(phi[i])) {
      throw ValidationError("protocol: phi must be finite and nonnegative");
    }
    if (is_robust(variant) && !(phi[i] > 0.0)) {
      throw ValidationError("protocol: robust variant requires positive phi");
    }
  }
}

double rho(double s) {
  // NaN passes through so the integrator can report divergence.
  if (s < 0.0) throw ValidationError("rho: argument must be nonnegative");
  const double base = 1.0 + s;
  return base * base * base;
}

Vector relative_state(int i, const Eigen::Ref<const Vector>& x, const DirectedGraph& g) {
  const int n_agents = g.n_vertices();
  if (i < 0 || i >= n_agents) {
    throw ValidationError("relative_state: agent index " + std::to_string(i) + " out of range");
  }
  if (x.size() == 0 || x.size() % n_agents != 0) {
    throw ValidationError("relative_state: stacked state length " + std::to_string(x.size()) +
                          " is not a multiple of the agent count");
  }
  const Eigen::Index n = x.size() / n_agents;
  Vector xi = Vector::Zero(n);
  const auto xi_self = x.segment(i * n, n);
  for (int j = 0; j < n_agents; ++j) {
    const double a = g.weight(i, j);
    if (a != 0.0) xi += a * (xi_self - x.segment(j * n, n));
  }
  return xi;
}

Vector control(const Eigen::Ref<const Vector>& xi, double gain, const GainDesign& d) {
  const double s = xi.dot(d.q * xi);
  return gain * rho(s) * (d.k * xi);
}

double gain_rate(const Eigen::Ref<const Vector>& xi, double gain, double phi,
                 const GainDesign& d) {
  return -phi * (gain - 1.0) + xi.dot(d.gamma * xi);
}

}  // namespace adacons
