#pragma once

#include <optional>
#include <vector>

#include "adacons/graph.hpp"
#include "adacons/protocol.hpp"
#include "adacons/sim.hpp"

namespace adacons {

/// Residual-set constants for the leader-follower robust protocol.
struct LeaderBound {
  double delta = 0.0;  // min follower phi
  double tau = 0.0;
  double alpha = 0.0;
  double pi = 0.0;
  double pi_adaptive = 0.0;     // (lambda_hat0 / 24) sum phi_i (alpha - 1)^2
  double pi_disturbance = 0.0;  // (12 / lambda_hat0) sigma_max^2(G L1) sum (ups_i + ups_1)^2
  double lambda_min_q = 0.0;
  double min_q = 0.0;
  double sigma_gl1 = 0.0;
  double radius_sq = 0.0;  // NaN unless applicable
  bool applicable = false;  // delta < tau
};

/// Residual-set constants for the leaderless robust protocol.
struct LeaderlessBound {
  double epsilon = 0.0;  // min phi
  double tau = 0.0;
  double beta = 0.0;
  double offset = 0.0;  // value whose (offset - 1)^2 enters Xi
  double xi = 0.0;
  double xi_adaptive = 0.0;
  double xi_disturbance = 0.0;
  double lambda_min_q = 0.0;
  double min_r = 0.0;
  double sigma_rl = 0.0;
  double radius_sq = 0.0;
  bool applicable = false;  // epsilon < tau
};

/// phi holds one entry per follower (N - 1); upsilon one per agent,
/// leader first. Throws ValidationError for nonpositive phi.
LeaderBound leader_bound(const LeaderConstants& lc, const GainDesign& d,
                         const std::vector<double>& phi, const std::vector<double>& upsilon);

/// phi and upsilon hold one entry per agent. By default the adaptive term
/// of Xi uses (beta - 1)^2; `offset_override` substitutes another value
/// for beta in that term only.
LeaderlessBound leaderless_bound(const StrongConstants& sc, const GainDesign& d,
                                 const std::vector<double>& phi,
                                 const std::vector<double>& upsilon,
                                 std::optional<double> offset_override = std::nullopt);

/// sqrt(sum_{i >= 2} (ups_i + ups_1)^2), a bound on the stacked
/// leader-relative disturbance.
double omega_tilde_bound(const std::vector<double>& upsilon);

struct ContainmentReport {
  double observed_sq = 0.0;
  double bound_sq = 0.0;
  bool contained = false;
  double slack_ratio = 0.0;  // bound_sq / observed_sq, +inf for a zero tail
};

/// Compares the squared tail supremum of the consensus error with the
/// residual radius. Throws ValidationError when the bound is inapplicable.
ContainmentReport check_containment(const Trajectory& traj, const LeaderBound& bound,
                                    double window_fraction = 0.5);
ContainmentReport check_containment(const Trajectory& traj, const LeaderlessBound& bound,
                                    double window_fraction = 0.5);

}  // namespace adacons
