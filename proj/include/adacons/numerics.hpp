#pragma once

#include <Eigen/Dense>

namespace adacons {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace numerics {

/// Throws ValidationError if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& m, const char* what);

/// Solves M X = rhs. Rejects matrices whose pivots fall below 1e-12
/// relative to the largest pivot.
Matrix lu_solve(const Eigen::Ref<const Matrix>& m,
                const Eigen::Ref<const Matrix>& rhs);

struct SymEig {
  Vector values;   // ascending
  Matrix vectors;  // column i pairs with values(i)
};

/// Cyclic Jacobi eigensolver for symmetric matrices. The input is
/// symmetrized first; asymmetry beyond 1e-10 relative is rejected.
SymEig sym_eig(const Eigen::Ref<const Matrix>& s);

double lambda_min(const Eigen::Ref<const Matrix>& s);
double lambda_max(const Eigen::Ref<const Matrix>& s);

/// Solves A^T X + X A + C = 0 through the Kronecker-vectorized system
/// (I ⊗ A^T + A^T ⊗ I) vec(X) = -vec(C). Returns the symmetrized X.
Matrix lyapunov_solve(const Eigen::Ref<const Matrix>& a,
                      const Eigen::Ref<const Matrix>& c);

/// Lyapunov criterion: A is Hurwitz iff A^T X + X A + I = 0 has a
/// positive-definite solution.
bool is_hurwitz(const Eigen::Ref<const Matrix>& a);

/// Largest singular value, sqrt(lambda_max(M^T M)).
double sigma_max(const Eigen::Ref<const Matrix>& m);

struct AreOptions {
  double tol = 1e-10;
  int max_flow_steps = 10000;
  int max_newton_steps = 50;
};

struct AreSolution {
  Matrix q;
  double residual_norm = 0.0;
  int iterations = 0;  // flow steps + Newton steps
};

/// Frobenius norm of A^T Q + Q A + I - Q B B^T Q.
double are_residual(const Eigen::Ref<const Matrix>& a,
                    const Eigen::Ref<const Matrix>& b,
                    const Eigen::Ref<const Matrix>& q);

/// Stabilizing solution of A^T Q + Q A + I - Q B B^T Q = 0.
///
/// The Riccati flow dQ/dt = A^T Q + Q A + I - Q B B^T Q is integrated from
/// Q(0) = I with a step that shrinks on rejected steps and grows slowly on
/// accepted ones, until the flow speed drops below sqrt(tol). The result
/// seeds Newton-Kleinman refinement, where each iterate solves a Lyapunov
/// equation for the closed loop A - B B^T Q_k.
AreSolution solve_are(const Eigen::Ref<const Matrix>& a,
                      const Eigen::Ref<const Matrix>& b,
                      const AreOptions& options = {});

}  // namespace numerics
}  // namespace adacons
