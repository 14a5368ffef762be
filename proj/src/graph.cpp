#include "adacons/graph.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "adacons/error.hpp"

namespace adacons {

namespace {

constexpr double kNullResidualTolerance = 1e-10;

// Reachability from `start`. With forward = true an edge j -> i exists when
// a(i, j) > 0; with forward = false the edges are reversed.
std::vector<bool> reachable(const Matrix& a, int start, bool forward) {
  const int n = static_cast<int>(a.rows());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::deque<int> frontier{start};
  seen[static_cast<std::size_t>(start)] = true;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop_front();
    for (int w = 0; w < n; ++w) {
      const double link = forward ? a(w, v) : a(v, w);
      if (link > 0.0 && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        frontier.push_back(w);
      }
    }
  }
  return seen;
}

bool all_true(const std::vector<bool>& v) {
  for (bool b : v)
    if (!b) return false;
  return true;
}

}  // namespace

DirectedGraph::DirectedGraph(Matrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols() || weights_.rows() == 0) {
    throw ValidationError("graph: adjacency matrix must be nonempty and square");
  }
  numerics::require_finite(weights_, "graph");
  for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
    if (weights_(i, i) != 0.0) {
      throw ValidationError("graph: self-loop at vertex " + std::to_string(i + 1));
    }
    for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
      if (weights_(i, j) < 0.0) {
        throw ValidationError("graph: negative weight on edge " + std::to_string(j + 1) + " -> " +
                              std::to_string(i + 1));
      }
    }
  }
}

DirectedGraph DirectedGraph::from_edges(int n_vertices, const std::vector<Edge>& edges) {
  if (n_vertices <= 0) throw ValidationError("graph: vertex count must be positive");
  Matrix a = Matrix::Zero(n_vertices, n_vertices);
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= n_vertices || e.to < 0 || e.to >= n_vertices) {
      throw ValidationError("graph: edge " + std::to_string(e.from + 1) + " -> " +
                            std::to_string(e.to + 1) + " references a missing vertex");
    }
    if (e.from == e.to) {
      throw ValidationError("graph: self-loop at vertex " + std::to_string(e.from + 1));
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("graph: edge weights must be finite and nonnegative");
    }
    a(e.to, e.from) += e.weight;
  }
  return DirectedGraph(std::move(a));
}

DirectedGraph DirectedGraph::permuted(const std::vector<int>& perm) const {
  const int n = n_vertices();
  if (static_cast<int>(perm.size()) != n) {
    throw ValidationError("graph: permutation has the wrong length");
  }
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(perm[i], perm[j]) = weights_(i, j);
  return DirectedGraph(std::move(a));
}

Matrix laplacian(const DirectedGraph& g) {
  Matrix l = -g.weights();
  for (int i = 0; i < g.n_vertices(); ++i) l(i, i) = g.weights().row(i).sum();
  return l;
}

bool contains_spanning_tree(const DirectedGraph& g, int root) {
  if (root < 0 || root >= g.n_vertices()) {
    throw std::out_of_range("contains_spanning_tree: root " + std::to_string(root) +
                            " out of range");
  }
  return all_true(reachable(g.weights(), root, true));
}

bool is_strongly_connected(const DirectedGraph& g) {
  return all_true(reachable(g.weights(), 0, true)) && all_true(reachable(g.weights(), 0, false));
}

LeaderPartition partition_leader(const Eigen::Ref<const Matrix>& l) {
  if (l.rows() != l.cols() || l.rows() < 2) {
    throw ValidationError("partition_leader: need a square Laplacian with at least two vertices");
  }
  if (!l.row(0).isZero(0.0)) {
    throw ValidationError(
        "Assumption 2 violated: the leader (vertex 1) must have no neighbors (zero in-degree)");
  }
  const Eigen::Index m = l.rows() - 1;
  return LeaderPartition{l.bottomRightCorner(m, m), l.bottomLeftCorner(m, 1)};
}

LeaderConstants leader_constants(const LeaderPartition& p) {
  const Eigen::Index m = p.l1.rows();
  Vector q;
  try {
    q = numerics::lu_solve(p.l1.transpose(), Vector::Ones(m));
  } catch (const NumericalError&) {
    throw ValidationError(
        "Assumption 2 violated: follower block L1 is singular (no directed spanning tree rooted "
        "at the leader)");
  }
  if ((q.array() <= 0.0).any()) {
    throw ValidationError(
        "Assumption 2 violated: (L1^T)^{-1} 1 has a nonpositive entry; L1 is not a nonsingular "
        "M-matrix");
  }
  Matrix g = q.asDiagonal();
  const double lambda_hat0 = numerics::lambda_min(g * p.l1 + p.l1.transpose() * g);
  if (!(lambda_hat0 > 0.0)) {
    throw ValidationError(
        "Assumption 2 violated: G L1 + L1^T G is not positive definite");
  }
  return LeaderConstants{p.l1, std::move(q), std::move(g), lambda_hat0};
}

StrongConstants strong_constants(const Eigen::Ref<const Matrix>& l) {
  if (l.rows() != l.cols() || l.rows() < 2) {
    throw ValidationError("strong_constants: need a square Laplacian with at least two vertices");
  }
  const Eigen::Index n = l.rows();
  // Solve L^T r = 0 with the normalization sum r = 1 replacing the last
  // equation; the system is nonsingular iff zero is a simple eigenvalue.
  Matrix m = l.transpose();
  m.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;
  Vector r;
  try {
    r = numerics::lu_solve(m, rhs);
  } catch (const NumericalError&) {
    throw ValidationError(
        "graph is not strongly connected: Laplacian null space is not one-dimensional");
  }
  if ((l.transpose() * r).norm() > kNullResidualTolerance || (r.array() <= 0.0).any()) {
    throw ValidationError(
        "graph is not strongly connected: left null vector of L is not strictly positive");
  }
  Matrix big_r = r.asDiagonal();
  Matrix l_hat = big_r * l + l.transpose() * big_r;
  l_hat = 0.5 * (l_hat + l_hat.transpose());
  const double lambda2 = numerics::sym_eig(l_hat).values(1);
  if (!(lambda2 > 0.0)) {
    throw ValidationError("graph is not strongly connected: lambda_2 of L_hat is not positive");
  }
  return StrongConstants{l, std::move(r), std::move(big_r), std::move(l_hat), lambda2};
}

}  // namespace adacons
