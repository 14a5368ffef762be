#include "adacons/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adacons/error.hpp"

namespace adacons {

namespace {

void require_positive_phi(const std::vector<double>& phi, std::size_t expected, const char* what) {
  if (phi.size() != expected) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(expected) +
                          " phi entries, got " + std::to_string(phi.size()));
  }
  for (double p : phi) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw ValidationError(std::string(what) + ": phi entries must be positive");
    }
  }
}

void require_upsilon(const std::vector<double>& upsilon, std::size_t expected, const char* what) {
  if (upsilon.size() != expected) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(expected) +
                          " disturbance bounds, got " + std::to_string(upsilon.size()));
  }
  for (double u : upsilon) {
    if (!(u >= 0.0) || !std::isfinite(u)) {
      throw ValidationError(std::string(what) + ": disturbance bounds must be nonnegative");
    }
  }
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

ContainmentReport containment(const Trajectory& traj, double radius_sq, bool applicable,
                              const char* verdict, double window_fraction) {
  if (!applicable) throw ValidationError(std::string("inapplicable: ") + verdict);
  const double tail = tail_sup_norm(traj, window_fraction);
  ContainmentReport r;
  r.observed_sq = tail * tail;
  r.bound_sq = radius_sq;
  r.contained = r.observed_sq <= r.bound_sq;
  r.slack_ratio = r.observed_sq > 0.0 ? r.bound_sq / r.observed_sq
                                      : std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace

LeaderBound leader_bound(const LeaderConstants& lc, const GainDesign& d,
                         const std::vector<double>& phi, const std::vector<double>& upsilon) {
  const std::size_t followers = static_cast<std::size_t>(lc.q.size());
  require_positive_phi(phi, followers, "leader_bound");
  require_upsilon(upsilon, followers + 1, "leader_bound");

  const double l0 = lc.lambda_hat0;
  const double max_q = lc.q.maxCoeff();
  LeaderBound b;
  b.delta = *std::min_element(phi.begin(), phi.end());
  b.tau = d.tau;
  b.alpha = 72.0 / (l0 * l0) * max_q * max_q + 2.0 * max_q * max_q * max_q / (l0 * l0 * l0);
  b.sigma_gl1 = numerics::sigma_max(lc.g * lc.l1);
  double dist = 0.0;
  for (std::size_t i = 1; i < upsilon.size(); ++i) {
    const double s = upsilon[i] + upsilon[0];
    dist += s * s;
  }
  b.pi_adaptive = l0 / 24.0 * sum(phi) * (b.alpha - 1.0) * (b.alpha - 1.0);
  b.pi_disturbance = 12.0 / l0 * b.sigma_gl1 * b.sigma_gl1 * dist;
  b.pi = b.pi_adaptive + b.pi_disturbance;
  b.lambda_min_q = numerics::lambda_min(d.q);
  b.min_q = lc.q.minCoeff();
  b.applicable = b.delta < b.tau;
  b.radius_sq = b.applicable ? 2.0 * b.pi / ((b.tau - b.delta) * b.lambda_min_q * b.min_q)
                             : std::numeric_limits<double>::quiet_NaN();
  return b;
}

LeaderlessBound leaderless_bound(const StrongConstants& sc, const GainDesign& d,
                                 const std::vector<double>& phi,
                                 const std::vector<double>& upsilon,
                                 std::optional<double> offset_override) {
  const std::size_t n_agents = static_cast<std::size_t>(sc.r.size());
  require_positive_phi(phi, n_agents, "leaderless_bound");
  require_upsilon(upsilon, n_agents, "leaderless_bound");

  const double n = static_cast<double>(n_agents);
  const double l2 = sc.lambda2_hat;
  const double max_r = sc.r.maxCoeff();
  LeaderlessBound b;
  b.epsilon = *std::min_element(phi.begin(), phi.end());
  b.tau = d.tau;
  b.beta = 72.0 * n * n / l2 * max_r * max_r +
           2.0 * max_r * max_r * max_r * n * n * n / (l2 * l2 * l2);
  b.offset = offset_override.value_or(b.beta);
  b.sigma_rl = numerics::sigma_max(sc.big_r * sc.l);
  double dist = 0.0;
  for (double u : upsilon) dist += u * u;
  b.xi_adaptive = l2 / (24.0 * n) * sum(phi) * (b.offset - 1.0) * (b.offset - 1.0);
  b.xi_disturbance = 12.0 * n / l2 * b.sigma_rl * b.sigma_rl * dist;
  b.xi = b.xi_adaptive + b.xi_disturbance;
  b.lambda_min_q = numerics::lambda_min(d.q);
  b.min_r = sc.r.minCoeff();
  b.applicable = b.epsilon < b.tau;
  b.radius_sq = b.applicable ? 2.0 * b.xi / ((b.tau - b.epsilon) * b.lambda_min_q * b.min_r)
                             : std::numeric_limits<double>::quiet_NaN();
  return b;
}

double omega_tilde_bound(const std::vector<double>& upsilon) {
  if (upsilon.empty()) throw ValidationError("omega_tilde_bound: empty bound vector");
  double total = 0.0;
  for (double u : upsilon) {
    if (!(u >= 0.0)) throw ValidationError("omega_tilde_bound: bounds must be nonnegative");
  }
  for (std::size_t i = 1; i < upsilon.size(); ++i) {
    const double s = upsilon[i] + upsilon[0];
    total += s * s;
  }
  return std::sqrt(total);
}

ContainmentReport check_containment(const Trajectory& traj, const LeaderBound& bound,
                                    double window_fraction) {
  return containment(traj, bound.radius_sq, bound.applicable, "delta >= tau", window_fraction);
}

ContainmentReport check_containment(const Trajectory& traj, const LeaderlessBound& bound,
                                    double window_fraction) {
  return containment(traj, bound.radius_sq, bound.applicable, "epsilon >= tau", window_fraction);
}

}  // namespace adacons
