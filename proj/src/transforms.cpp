#include "pwls/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace pwls {

namespace {

Matrix scale_and_shift(const Matrix& a, double scale, double shift) {
  return std::visit(
      [&](const auto& m) -> Matrix {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, DenseMatrix>) {
          std::vector<double> d = m.data();
          for (double& v : d) v *= scale;
          DenseMatrix out(m.rows(), m.cols(), std::move(d));
          for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += shift;
          return out;
        } else if constexpr (std::is_same_v<M, SparseMatrix>) {
          std::vector<Triplet> t;
          for (std::size_t i = 0; i < m.rows(); ++i) {
            m.for_each_in_row(i, [&](std::size_t j, double v) { t.push_back({i, j, scale * v}); });
            t.push_back({i, i, shift});
          }
          return SparseMatrix::from_triplets(m.rows(), m.cols(), std::move(t));
        } else {
          auto scaled = [&](const Vector& v) {
            Vector out(v);
            for (double& e : out) e *= scale;
            return out;
          };
          Vector dg = scaled(m.diag());
          for (double& v : dg) v += shift;
          if (m.is_symmetric()) return PentaBandMatrix::symmetric(m.grid_side(), dg, scaled(m.upper1()), scaled(m.upperm()));
          return PentaBandMatrix::general(m.grid_side(), dg, scaled(m.lower1()), scaled(m.upper1()),
                                          scaled(m.lowerm()), scaled(m.upperm()));
        }
      },
      a);
}

}  // namespace

AveProblem pwls_to_ave(const PwlsProblem& p) {
  Vector b_hat = p.rhs();
  for (double& v : b_hat) v *= -2.0;
  return {scale_and_shift(p.matrix(), -2.0, -1.0), std::move(b_hat)};
}

PwlsProblem ave_to_pwls(const AveProblem& a) {
  if (rows(a.t_hat) != cols(a.t_hat) || rows(a.t_hat) != a.b_hat.size())
    throw DimensionMismatch("ave_to_pwls: dimension mismatch");
  Matrix t = scale_and_shift(a.t_hat, -0.5, -0.5);
  // T^ + I = -2T must be invertible.
  const Vector probe(a.b_hat.size(), 0.0);
  lu_solve(t, probe, LuOptions{.fill_reducing_ordering = true});
  Vector b = a.b_hat;
  for (double& v : b) v *= -0.5;
  return PwlsProblem(std::move(t), std::move(b));
}

Vector ave_residual(const AveProblem& a, std::span<const double> x) {
  if (x.size() != a.b_hat.size()) throw DimensionMismatch("ave_residual: length mismatch");
  Vector r = matvec(a.t_hat, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= std::abs(x[i]) + a.b_hat[i];
  return r;
}

PwlsProblem qp_to_pwls(const QpProblem& qp) {
  const std::size_t n = rows(qp.q_matrix);
  if (cols(qp.q_matrix) != n || qp.q.size() != n) throw DimensionMismatch("qp_to_pwls: dimension mismatch");
  DenseMatrix shifted = to_dense(qp.q_matrix);
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= 1.0;
  // Columns of (Q - I)^{-1}, one solve per unit vector.
  DenseMatrix t(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vector col = lu_solve(shifted, e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) t(i, j) = col[i];
  }
  Vector b = matvec(t, qp.q);
  for (double& v : b) v = -v;
  return PwlsProblem(std::move(t), std::move(b));
}

KktResult kkt_check(const QpProblem& qp, std::span<const double> z) {
  if (z.size() != qp.q.size() || rows(qp.q_matrix) != z.size()) throw DimensionMismatch("kkt_check: length mismatch");
  const double tol = 1e-8 * (1.0 + norm_inf(qp.q));
  Vector grad = matvec(qp.q_matrix, z);
  double worst = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    grad[i] += qp.q[i];
    worst = std::max({worst, -z[i], -grad[i], std::abs(z[i] * grad[i])});
  }
  return {worst <= tol, std::max(worst, 0.0)};
}

}  // namespace pwls
