#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "adacons/bounds.hpp"
#include "adacons/error.hpp"

using namespace adacons;

namespace {

GainDesign double_integrator() {
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  Matrix b(2, 1);
  b << 0, 1;
  return design_gains(a, b);
}

Matrix stand_in_laplacian() {
  return laplacian(
      DirectedGraph::from_edges(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 1}}));
}

const std::vector<double> kUpsilon = {0, 0.2, 0.1, 0.2, 0.3, 0.2, 0};

double sq(double v) { return v * v; }

// Independent evaluation of the leader residual radius straight from the
// Laplacian, using Eigen's dense solvers only.
struct LeaderOracle {
  double alpha, pi, radius_sq;
};

LeaderOracle leader_oracle(const Matrix& l, const Matrix& q_are, const std::vector<double>& phi,
                           const std::vector<double>& ups) {
  const int n = static_cast<int>(l.rows());
  const Matrix l1 = l.bottomRightCorner(n - 1, n - 1);
  const Vector q = l1.transpose().fullPivLu().solve(Vector::Ones(n - 1));
  const Matrix g = q.asDiagonal();
  const double lam0 = Eigen::SelfAdjointEigenSolver<Matrix>(g * l1 + l1.transpose() * g).eigenvalues()(0);
  const double qmax = q.maxCoeff();
  const double alpha = 72 * sq(qmax) / sq(lam0) + 2 * std::pow(qmax, 3) / std::pow(lam0, 3);
  double sum_phi = 0, sum_ups = 0;
  for (double p : phi) sum_phi += p;
  for (int i = 1; i < n; ++i) sum_ups += sq(ups[i] + ups[0]);
  const double smax = Eigen::JacobiSVD<Matrix>(g * l1).singularValues()(0);
  const double pi = lam0 / 24 * sum_phi * sq(alpha - 1) + 12 / lam0 * sq(smax) * sum_ups;
  const Eigen::SelfAdjointEigenSolver<Matrix> qe(q_are);
  const double tau = 1 / qe.eigenvalues()(qe.eigenvalues().size() - 1);
  const double delta = *std::min_element(phi.begin(), phi.end());
  return {alpha, pi, 2 * pi / ((tau - delta) * qe.eigenvalues()(0) * q.minCoeff())};
}

LeaderBound reference_bound(const std::vector<double>& phi, const std::vector<double>& ups) {
  return leader_bound(leader_constants(partition_leader(stand_in_laplacian())), double_integrator(),
                      phi, ups);
}

Trajectory constant_error_trajectory(double e, Mode mode) {
  Trajectory tr;
  tr.mode = mode;
  for (int k = 0; k <= 10; ++k) {
    tr.times.push_back(k);
    tr.err_norms.push_back(e);
  }
  return tr;
}

}  // namespace

TEST(OmegaTilde, Values) {
  EXPECT_DOUBLE_EQ(omega_tilde_bound({0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(omega_tilde_bound({0, 3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(omega_tilde_bound({1, 1, 1}), std::sqrt(8.0));
  EXPECT_THROW(omega_tilde_bound({0, -1}), ValidationError);
}

TEST(LeaderBound, ReferenceMatchesIndependentEvaluation) {
  const std::vector<double> phi(6, 0.02);
  const LeaderBound b = reference_bound(phi, kUpsilon);
  const LeaderOracle o = leader_oracle(stand_in_laplacian(), double_integrator().q, phi, kUpsilon);
  ASSERT_TRUE(b.applicable);
  EXPECT_NEAR(b.delta, 0.02, 1e-15);
  EXPECT_NEAR(b.alpha, o.alpha, 1e-9 * o.alpha);
  EXPECT_NEAR(b.pi, o.pi, 1e-9 * o.pi);
  EXPECT_NEAR(b.radius_sq, o.radius_sq, 1e-9 * o.radius_sq);
  EXPECT_NEAR(b.pi, b.pi_adaptive + b.pi_disturbance, 1e-9 * b.pi);
  EXPECT_TRUE(std::isfinite(b.radius_sq));
  EXPECT_GT(b.radius_sq, 0.0);
}

TEST(LeaderBound, ZeroDisturbanceSpecialization) {
  const LeaderConstants lc = leader_constants(partition_leader(stand_in_laplacian()));
  const LeaderBound b = reference_bound(std::vector<double>(6, 0.05), std::vector<double>(7, 0.0));
  EXPECT_DOUBLE_EQ(b.pi_disturbance, 0.0);
  EXPECT_NEAR(b.pi, lc.lambda_hat0 / 24 * 6 * 0.05 * sq(b.alpha - 1), 1e-9 * b.pi);
}

TEST(LeaderBound, DisturbanceTermIsQuadratic) {
  std::vector<double> ups2 = kUpsilon;
  for (double& u : ups2) u *= 2;
  const LeaderBound a = reference_bound(std::vector<double>(6, 0.02), kUpsilon);
  const LeaderBound b = reference_bound(std::vector<double>(6, 0.02), ups2);
  EXPECT_NEAR(b.pi_disturbance, 4 * a.pi_disturbance, 1e-9 * b.pi_disturbance);
  EXPECT_NEAR(b.pi_adaptive, a.pi_adaptive, 1e-12 * a.pi_adaptive);
}

TEST(LeaderBound, MonotoneInUpsilonAndPhi) {
  const std::vector<double> phi(6, 0.02);
  const double base = reference_bound(phi, kUpsilon).radius_sq;
  for (int i = 0; i < 7; ++i) {
    std::vector<double> ups = kUpsilon;
    ups[i] += 1e-3;
    EXPECT_GE(reference_bound(phi, ups).radius_sq, base) << "agent " << i;
  }
  // Shrinking every phi lowers the adaptive term and widens tau - delta.
  const LeaderBound hi = reference_bound(std::vector<double>(6, 0.02), kUpsilon);
  const LeaderBound lo = reference_bound(std::vector<double>(6, 0.01), kUpsilon);
  EXPECT_LT(lo.pi_adaptive, hi.pi_adaptive);
  EXPECT_GT(lo.tau - lo.delta, hi.tau - hi.delta);
  EXPECT_LT(lo.radius_sq, hi.radius_sq);
}

TEST(LeaderBound, InapplicableWhenPhiExceedsTau) {
  const LeaderBound b = reference_bound(std::vector<double>(6, 0.5), kUpsilon);
  EXPECT_FALSE(b.applicable);
  EXPECT_TRUE(std::isnan(b.radius_sq));
  try {
    check_containment(constant_error_trajectory(0.1, Mode::Leader), b);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("inapplicable: delta >= tau"), std::string::npos);
  }
}

TEST(LeaderBound, RejectsBadInputs) {
  EXPECT_THROW(reference_bound(std::vector<double>(6, 0.0), kUpsilon), ValidationError);
  EXPECT_THROW(reference_bound(std::vector<double>(5, 0.02), kUpsilon), ValidationError);
  EXPECT_THROW(reference_bound(std::vector<double>(6, 0.02), {0, 1}), ValidationError);
}

TEST(LeaderlessBound, CycleHandEvaluation) {
  const Matrix l = laplacian(DirectedGraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}}));
  const StrongConstants sc = strong_constants(l);
  const GainDesign d = double_integrator();
  const std::vector<double> phi(3, 0.02);
  const std::vector<double> ups = {0.1, 0.2, 0.0};
  const LeaderlessBound b = leaderless_bound(sc, d, phi, ups);
  // r = 1/3 each and lambda2 = 1.
  const double n = 3, r = 1.0 / 3.0;
  const double beta = 72 * n * n * r * r / 1.0 + 2 * std::pow(r, 3) * std::pow(n, 3) / 1.0;
  EXPECT_NEAR(b.beta, beta, 1e-9);
  EXPECT_NEAR(b.beta, 74.0, 1e-9);
  EXPECT_NEAR(b.offset, b.beta, 0.0);
  const double sig = Eigen::JacobiSVD<Matrix>(l / 3.0).singularValues()(0);
  const double xi = 1.0 / (24 * n) * 0.06 * sq(beta - 1) + 12 * n / 1.0 * sq(sig) * (0.01 + 0.04);
  EXPECT_NEAR(b.xi, xi, 1e-9 * xi);
  const Eigen::SelfAdjointEigenSolver<Matrix> qe(d.q);
  EXPECT_NEAR(b.radius_sq, 2 * xi / ((d.tau - 0.02) * qe.eigenvalues()(0) * r), 1e-9 * b.radius_sq);
  EXPECT_TRUE(b.applicable);
}

TEST(LeaderlessBound, LinearInPhiAndOverride) {
  const StrongConstants sc =
      strong_constants(laplacian(DirectedGraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}})));
  const GainDesign d = double_integrator();
  const LeaderlessBound a = leaderless_bound(sc, d, {0.01, 0.02, 0.03}, {0, 0, 0});
  const LeaderlessBound b = leaderless_bound(sc, d, {0.02, 0.04, 0.06}, {0, 0, 0});
  EXPECT_NEAR(b.xi_adaptive, 2 * a.xi_adaptive, 1e-12 * b.xi_adaptive);
  EXPECT_DOUBLE_EQ(a.xi_disturbance, 0.0);
  const LeaderlessBound o = leaderless_bound(sc, d, {0.01, 0.02, 0.03}, {0, 0, 0}, 4.0);
  EXPECT_DOUBLE_EQ(o.offset, 4.0);
  EXPECT_NEAR(o.xi_adaptive, a.xi_adaptive * sq(3.0) / sq(a.beta - 1), 1e-12);
  EXPECT_FALSE(leaderless_bound(sc, d, {0.5, 0.5, 0.5}, {0, 0, 0}).applicable);
  EXPECT_THROW(leaderless_bound(sc, d, {0.5, 0.0, 0.5}, {0, 0, 0}), ValidationError);
}

// Relabeling followers permutes q (resp. r) and leaves the radius alone.
TEST(Bounds, PermutationInvariance) {
  const DirectedGraph g =
      DirectedGraph::from_edges(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 1}, {3, 6, 0.5}});
  const std::vector<int> perm = {0, 4, 2, 6, 1, 3, 5};
  const GainDesign d = double_integrator();
  std::vector<double> phi = {0.02, 0.03, 0.025, 0.02, 0.04, 0.015};
  std::vector<double> phi_p(6), ups_p(7);
  for (int v = 1; v < 7; ++v) phi_p[perm[v] - 1] = phi[v - 1];
  for (int v = 0; v < 7; ++v) ups_p[perm[v]] = kUpsilon[v];
  const LeaderBound a = leader_bound(leader_constants(partition_leader(laplacian(g))), d, phi, kUpsilon);
  const LeaderBound b =
      leader_bound(leader_constants(partition_leader(laplacian(g.permuted(perm)))), d, phi_p, ups_p);
  EXPECT_NEAR(a.radius_sq, b.radius_sq, 1e-9 * a.radius_sq);

  const DirectedGraph s = DirectedGraph::from_edges(
      5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2, 0.5}, {3, 1}});
  const std::vector<int> sp = {3, 0, 4, 1, 2};
  const std::vector<double> sphi = {0.02, 0.03, 0.01, 0.05, 0.02};
  const std::vector<double> sups = {0.1, 0.2, 0.15, 0.1, 0.05};
  std::vector<double> sphi_p(5), sups_p(5);
  for (int v = 0; v < 5; ++v) {
    sphi_p[sp[v]] = sphi[v];
    sups_p[sp[v]] = sups[v];
  }
  const LeaderlessBound c = leaderless_bound(strong_constants(laplacian(s)), d, sphi, sups);
  const LeaderlessBound e =
      leaderless_bound(strong_constants(laplacian(s.permuted(sp))), d, sphi_p, sups_p);
  EXPECT_NEAR(c.radius_sq, e.radius_sq, 1e-9 * c.radius_sq);
}

TEST(Containment, ZeroAndViolation) {
  const LeaderBound b = reference_bound(std::vector<double>(6, 0.02), kUpsilon);
  const ContainmentReport z = check_containment(constant_error_trajectory(0.0, Mode::Leader), b);
  EXPECT_TRUE(z.contained);
  EXPECT_DOUBLE_EQ(z.observed_sq, 0.0);
  EXPECT_EQ(z.slack_ratio, std::numeric_limits<double>::infinity());

  const double big = 2 * std::sqrt(b.radius_sq);
  const ContainmentReport v = check_containment(constant_error_trajectory(big, Mode::Leader), b);
  EXPECT_FALSE(v.contained);
  EXPECT_NEAR(v.observed_sq, big * big, 1e-9 * big * big);
  EXPECT_NEAR(v.slack_ratio, 0.25, 1e-12);
}
