#include "adacons/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "adacons/error.hpp"

namespace adacons::numerics {

namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr double kSymmetryTolerance = 1e-10;
constexpr double kLyapunovTolerance = 1e-9;
constexpr int kMaxJacobiSweeps = 100;

void require_square(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError(std::string(what) + ": expected a nonempty square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

Matrix symmetrized(const Eigen::Ref<const Matrix>& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": matrix has non-finite entries");
  }
}

Matrix lu_solve(const Eigen::Ref<const Matrix>& m, const Eigen::Ref<const Matrix>& rhs) {
  require_square(m, "lu_solve");
  if (rhs.rows() != m.rows()) {
    throw ValidationError("lu_solve: right-hand side has " + std::to_string(rhs.rows()) +
                          " rows, matrix has " + std::to_string(m.rows()));
  }
  require_finite(m, "lu_solve");
  require_finite(rhs, "lu_solve");

  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(kPivotTolerance);
  if (!lu.isInvertible()) {
    throw NumericalError("lu_solve: matrix is singular to tolerance (rank " +
                         std::to_string(lu.rank()) + " of " + std::to_string(m.rows()) + ")");
  }
  Matrix x = lu.solve(rhs);
  // Backward-error check: a stable solve leaves a residual of order
  // eps * (|M| |X| + |rhs|).
  const double residual = (m * x - rhs).norm();
  const double scale = m.norm() * x.norm() + rhs.norm();
  if (!x.allFinite() || residual > 1e-10 * std::max(scale, 1e-300)) {
    throw NumericalError("lu_solve: residual " + std::to_string(residual) +
                         " exceeds tolerance; matrix is too ill-conditioned");
  }
  return x;
}

SymEig sym_eig(const Eigen::Ref<const Matrix>& s) {
  require_square(s, "sym_eig");
  require_finite(s, "sym_eig");
  const Eigen::Index n = s.rows();
  const double norm = s.norm();
  if ((s - s.transpose()).norm() > kSymmetryTolerance * std::max(norm, 1.0)) {
    throw ValidationError("sym_eig: matrix is not symmetric");
  }

  Matrix a = symmetrized(s);
  Matrix v = Matrix::Identity(n, n);

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= 1e-15 * norm || off == 0.0) break;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        // A <- J^T A J with J the (p, q) plane rotation [c s; -s c].
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  SymEig out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

double lambda_min(const Eigen::Ref<const Matrix>& s) { return sym_eig(s).values(0); }

double lambda_max(const Eigen::Ref<const Matrix>& s) {
  const SymEig e = sym_eig(s);
  return e.values(e.values.size() - 1);
}

Matrix lyapunov_solve(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& c) {
  require_square(a, "lyapunov_solve");
  require_square(c, "lyapunov_solve");
  if (a.rows() != c.rows()) {
    throw ValidationError("lyapunov_solve: A and C dimensions differ");
  }
  const Eigen::Index n = a.rows();
  const Eigen::Index n2 = n * n;

  // Column-major vec: X(i, j) sits at i + j n.
  Matrix kron = Matrix::Zero(n2, n2);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = i + j * n;
      for (Eigen::Index k = 0; k < n; ++k) {
        kron(row, k + j * n) += a(k, i);  // (A^T X)(i, j)
        kron(row, i + k * n) += a(k, j);  // (X A)(i, j)
      }
    }
  }
  const Vector rhs = -Eigen::Map<const Vector>(Matrix(c).data(), n2);

  Vector vec_x;
  try {
    vec_x = lu_solve(kron, rhs);
  } catch (const NumericalError& e) {
    throw NumericalError(
        std::string("lyapunov_solve: A has eigenvalues summing to zero in pairs (not Hurwitz): ") +
        e.what());
  }
  Matrix x = symmetrized(Eigen::Map<const Matrix>(vec_x.data(), n, n));

  const double residual = (a.transpose() * x + x * a + c).norm();
  if (residual > kLyapunovTolerance * std::max(1.0, c.norm())) {
    throw NumericalError("lyapunov_solve: residual " + std::to_string(residual) +
                         " exceeds tolerance");
  }
  return x;
}

bool is_hurwitz(const Eigen::Ref<const Matrix>& a) {
  if (a.rows() != a.cols() || a.rows() == 0 || !a.allFinite()) return false;
  try {
    const Matrix x = lyapunov_solve(a, Matrix::Identity(a.rows(), a.cols()));
    return x.allFinite() && lambda_min(x) > 0.0;
  } catch (const Error&) {
    return false;
  }
}

double sigma_max(const Eigen::Ref<const Matrix>& m) {
  if (m.size() == 0) return 0.0;
  require_finite(m, "sigma_max");
  const Matrix gram = m.rows() >= m.cols() ? Matrix(m.transpose() * m) : Matrix(m * m.transpose());
  return std::sqrt(std::max(0.0, lambda_max(gram)));
}

double are_residual(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b,
                    const Eigen::Ref<const Matrix>& q) {
  const Eigen::Index n = a.rows();
  return (a.transpose() * q + q * a + Matrix::Identity(n, n) - q * b * b.transpose() * q).norm();
}

AreSolution solve_are(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b,
                      const AreOptions& options) {
  require_square(a, "solve_are");
  if (b.rows() != a.rows() || b.cols() == 0) {
    throw ValidationError("solve_are: B must have as many rows as A and at least one column");
  }
  require_finite(a, "solve_are");
  require_finite(b, "solve_are");
  if (!(options.tol > 0.0)) throw ValidationError("solve_are: tol must be positive");

  const Eigen::Index n = a.rows();
  const Matrix identity = Matrix::Identity(n, n);
  const Matrix bbt = b * b.transpose();
  const auto flow = [&](const Matrix& q) -> Matrix {
    return a.transpose() * q + q * a + identity - q * bbt * q;
  };

  // Riccati flow warm start: RK4 with step-doubling error control. The
  // flow may speed up during transients, so only the local error steers h.
  const auto rk4 = [&](const Matrix& q0, const Matrix& f0, double step) {
    const Matrix k2 = flow(q0 + 0.5 * step * f0);
    const Matrix k3 = flow(q0 + 0.5 * step * k2);
    const Matrix k4 = flow(q0 + step * k3);
    return symmetrized(q0 + (step / 6.0) * (f0 + 2.0 * k2 + 2.0 * k3 + k4));
  };
  constexpr double kFlowLocalTol = 1e-8;
  Matrix q = identity;
  Matrix f = flow(q);
  double speed = f.norm();
  const double target_speed = std::sqrt(options.tol);
  double h = 0.05;
  int steps = 0;
  while (speed > target_speed && steps < options.max_flow_steps) {
    ++steps;
    const Matrix full = rk4(q, f, h);
    const Matrix half = rk4(q, f, 0.5 * h);
    const Matrix two_halves = rk4(half, flow(half), 0.5 * h);
    const double err = (full - two_halves).norm() / (1.0 + two_halves.norm());
    if (!two_halves.allFinite() || !std::isfinite(err) || err > kFlowLocalTol) {
      h *= std::isfinite(err) ? std::max(0.1, 0.9 * std::pow(kFlowLocalTol / err, 0.2)) : 0.25;
      if (h < 1e-14) break;
      continue;
    }
    q = two_halves;
    f = flow(q);
    speed = f.norm();
    const double grow = err > 0.0 ? 0.9 * std::pow(kFlowLocalTol / err, 0.2) : 2.0;
    h = std::min(h * std::clamp(grow, 1.0, 2.0), 10.0);
  }

  if (!is_hurwitz(a - bbt * q)) {
    throw NumericalError(
        "solve_are: Riccati flow did not reach a stabilizing iterate; (A,B) likely not "
        "stabilizable");
  }

  // Newton-Kleinman refinement.
  double residual = are_residual(a, b, q);
  int newton = 0;
  int stalled = 0;
  while (residual > options.tol && newton < options.max_newton_steps) {
    ++newton;
    const Matrix closed = a - bbt * q;
    Matrix next;
    try {
      next = lyapunov_solve(closed, identity + q * bbt * q);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("solve_are: Newton step failed; (A,B) likely not "
                                       "stabilizable: ") +
                           e.what());
    }
    const double next_residual = are_residual(a, b, next);
    stalled = next_residual >= residual ? stalled + 1 : 0;
    q = next;
    residual = next_residual;
    if (stalled >= 3) break;
  }

  if (residual > options.tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "solve_are: residual %.3g above tolerance %.3g (|Q| = %.3g)",
                  residual, options.tol, q.norm());
    throw NumericalError(std::string(buf) +
                         " after Newton refinement; (A,B) likely not stabilizable or too "
                         "ill-conditioned for the tolerance");
  }
  if (!(lambda_min(q) > 0.0) || !is_hurwitz(a - bbt * q)) {
    throw NumericalError("solve_are: solution is not the stabilizing one; (A,B) likely not "
                         "stabilizable");
  }
  return AreSolution{q, residual, steps + newton};
}

}  // namespace adacons::numerics
