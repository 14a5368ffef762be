#pragma once

#include <vector>

#include "adacons/numerics.hpp"

namespace adacons {

/// A weighted edge (from, to, weight) with zero-based vertex indices.
/// It makes `from` a neighbor of `to`: a(to, from) = weight.
struct Edge {
  int from = 0;
  int to = 0;
  double weight = 1.0;
  bool operator==(const Edge&) const = default;
};

/// Weighted directed communication graph. weights()(i, j) > 0 means j is a
/// neighbor of i, i.e. i receives information from j.
class DirectedGraph {
 public:
  /// Single isolated vertex.
  DirectedGraph() : weights_(Matrix::Zero(1, 1)) {}

  /// Throws ValidationError on self-loops, negative or non-finite weights,
  /// or a non-square matrix.
  explicit DirectedGraph(Matrix weights);

  /// Builds the adjacency matrix from an edge list; repeated edges
  /// accumulate their weights.
  static DirectedGraph from_edges(int n_vertices, const std::vector<Edge>& edges);

  int n_vertices() const { return static_cast<int>(weights_.rows()); }
  const Matrix& weights() const { return weights_; }
  double weight(int i, int j) const { return weights_(i, j); }

  /// Relabels vertices: vertex v of this graph becomes perm[v].
  DirectedGraph permuted(const std::vector<int>& perm) const;

 private:
  Matrix weights_;
};

/// L_ii = sum_{j != i} a_ij, L_ij = -a_ij.
Matrix laplacian(const DirectedGraph& g);

/// True iff every vertex is reachable from root along directed edges.
/// Throws std::out_of_range for a bad root.
bool contains_spanning_tree(const DirectedGraph& g, int root);

bool is_strongly_connected(const DirectedGraph& g);

/// Follower block decomposition of a leader-follower Laplacian with the
/// leader at index 0:  L = [0 0; L2 L1].
struct LeaderPartition {
  Matrix l1;  // (N-1) x (N-1)
  Matrix l2;  // (N-1) x 1
};

/// Throws ValidationError unless the first row of L is zero.
LeaderPartition partition_leader(const Eigen::Ref<const Matrix>& l);

/// q = (L1^T)^{-1} 1, G = diag(q), lambda_hat0 = lambda_min(G L1 + L1^T G).
struct LeaderConstants {
  Matrix l1;
  Vector q;
  Matrix g;
  double lambda_hat0 = 0.0;
};

/// Throws ValidationError naming Assumption 2 when L1 is singular or the
/// construction fails to produce positive q and lambda_hat0.
LeaderConstants leader_constants(const LeaderPartition& p);

/// r is the positive left null vector of L with sum 1, R = diag(r),
/// L_hat = R L + L^T R and lambda2_hat its smallest nonzero eigenvalue.
struct StrongConstants {
  Matrix l;
  Vector r;
  Matrix big_r;
  Matrix l_hat;
  double lambda2_hat = 0.0;
};

/// Throws ValidationError when the graph behind L is not strongly connected.
StrongConstants strong_constants(const Eigen::Ref<const Matrix>& l);

}  // namespace adacons
