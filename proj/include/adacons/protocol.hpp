#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adacons/graph.hpp"
#include "adacons/numerics.hpp"

namespace adacons {

/// Q solves the ARE; K = -B^T Q, Gamma = Q B B^T Q = K^T K, tau = 1/lambda_max(Q).
struct GainDesign {
  Matrix q;
  Matrix k;
  Matrix gamma;
  double tau = 0.0;
  double are_residual = 0.0;
};

GainDesign design_gains(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b,
                        const numerics::AreOptions& options = {});

enum class Variant { LeaderRobust, LeaderNonRobust, LeaderlessRobust, LeaderlessNonRobust };

enum class Mode { Leader, Leaderless };

Mode mode_of(Variant v);
bool is_robust(Variant v);
std::string_view to_string(Variant v);
/// Accepts leader_robust, leader_nonrobust, leaderless_robust,
/// leaderless_nonrobust. Throws ValidationError otherwise.
Variant parse_variant(std::string_view name);

/// Per adaptive agent (followers 2..N in leader mode, all agents in
/// leaderless mode).
struct ProtocolConfig {
  Variant variant = Variant::LeaderRobust;
  std::vector<double> phi;
  std::vector<double> initial_gains;

  /// Non-robust variants run with phi forced to zero.
  static ProtocolConfig make(Variant variant, std::vector<double> phi,
                             std::vector<double> initial_gains);
  /// Throws ValidationError when gains are below 1, phi is negative, or a
  /// robust variant has a nonpositive phi.
  void validate() const;
};

/// rho(s) = (1 + s)^3.
double rho(double s);

/// xi_i = sum_j a_ij (x_i - x_j) for the stacked state x of N agents.
Vector relative_state(int i, const Eigen::Ref<const Vector>& x, const DirectedGraph& g);

/// u_i = gain * rho(xi^T Q xi) * K xi.
Vector control(const Eigen::Ref<const Vector>& xi, double gain, const GainDesign& d);

/// -phi (gain - 1) + xi^T Gamma xi.
double gain_rate(const Eigen::Ref<const Vector>& xi, double gain, double phi,
                 const GainDesign& d);

}  // namespace adacons
