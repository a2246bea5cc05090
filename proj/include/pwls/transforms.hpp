#pragma once

// Bridges to the absolute value equation T^ x - |x| = b^ and to the
// nonnegativity-constrained quadratic program min 1/2 x'Qx + q'x, x >= 0.

#include "pwls/core.hpp"

namespace pwls {

struct AveProblem {
  Matrix t_hat;
  Vector b_hat;
};

struct QpProblem {
  Matrix q_matrix;
  Vector q;
};

struct KktResult {
  bool feasible = false;
  double max_violation = 0.0;
};

/// T^ = -2T - I, b^ = -2b.
AveProblem pwls_to_ave(const PwlsProblem& p);
/// T = -(T^ + I) / 2, b = -b^ / 2. Throws SingularMatrix if T^ + I is singular.
PwlsProblem ave_to_pwls(const AveProblem& a);

/// T^ x - |x| - b^
Vector ave_residual(const AveProblem& a, std::span<const double> x);

/// T = (Q - I)^{-1}, b = -T q. The positive part of a solution is then the
/// KKT point of the QP: Q x+ + q = x- >= 0 with x+ orthogonal to x-.
PwlsProblem qp_to_pwls(const QpProblem& qp);

/// z >= -tol, Qz + q >= -tol and |z_i (Qz + q)_i| <= tol with
/// tol = 1e-8 (1 + ||q||_inf).
KktResult kkt_check(const QpProblem& qp, std::span<const double> z);

}  // namespace pwls
