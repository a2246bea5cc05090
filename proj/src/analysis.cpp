#include "pwls/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pwls {

DiagonalDominance strong_diagonal_dominance(const Matrix& t) {
  const std::size_t n = rows(t);
  if (cols(t) != n) throw DimensionMismatch("strong_diagonal_dominance: matrix not square");
  DiagonalDominance out;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0, off = 1.0;
    for_each_in_row(t, i, [&](std::size_t j, double v) {
      if (j == i)
        diag = std::abs(v);
      else
        off += std::abs(v);
    });
    if (diag == 0.0) return out;
    worst = std::max(worst, off / diag);
  }
  out.worst_row_ratio = worst;
  out.holds = worst < 1.0;
  return out;
}

SassenfeldReport sassenfeld(const Matrix& t) {
  const std::size_t n = rows(t);
  if (cols(t) != n) throw DimensionMismatch("sassenfeld: matrix not square");
  SassenfeldReport out;
  out.betas.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0, acc = 1.0;
    for_each_in_row(t, i, [&](std::size_t j, double v) {
      if (j == i)
        diag = std::abs(v);
      else
        acc += std::abs(v) * (j < i ? out.betas[j] : 1.0);
    });
    if (diag == 0.0) throw ZeroDiagonal(i);
    out.betas[i] = acc / diag;
  }
  out.beta = n ? *std::max_element(out.betas.begin(), out.betas.end()) : 0.0;
  out.holds = out.beta < 1.0;
  return out;
}

bool is_spd(const Matrix& t) {
  const std::size_t n = rows(t);
  if (cols(t) != n) return false;
  DenseMatrix a = to_dense(t);
  const double scale = max_abs(t);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale) return false;
  // Cholesky; a nonpositive pivot rules out definiteness.
  for (std::size_t k = 0; k < n; ++k) {
    double d = a(k, k);
    for (std::size_t p = 0; p < k; ++p) d -= a(k, p) * a(k, p);
    if (!(d > 0.0)) return false;
    const double lkk = std::sqrt(d);
    a(k, k) = lkk;
    for (std::size_t i = k + 1; i < n; ++i) {
      double s = a(i, k);
      for (std::size_t p = 0; p < k; ++p) s -= a(i, p) * a(k, p);
      a(i, k) = s / lkk;
    }
  }
  return true;
}

DiagonalClassification diagonal_classify(const Matrix& t, std::span<const double> b, std::size_t enumeration_cap) {
  const std::size_t n = rows(t);
  if (cols(t) != n || b.size() != n) throw DimensionMismatch("diagonal_classify: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    for_each_in_row(t, i, [&](std::size_t j, double v) {
      if (j != i && v != 0.0) throw InvalidArgument("diagonal_classify: T is not diagonal");
    });
  const Vector d = diagonal(t);

  // Per component: the admissible values of x_i.
  std::vector<std::vector<double>> choices(n);
  DiagonalClassification out;
  out.verdict = DiagonalVerdict::Solutions;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = d[i], bi = b[i];
    if (ti == 0.0 || ti == -1.0)
      throw InvalidDiagonal("diagonal_classify: t_" + std::to_string(i) + " is " + std::to_string(ti));
    if (ti > 0.0) {
      choices[i] = {bi > 0.0 ? bi / (1.0 + ti) : bi / ti};
    } else if (ti < -1.0) {
      choices[i] = {bi > 0.0 ? bi / ti : bi / (1.0 + ti)};
    } else if (bi < 0.0) {
      out.verdict = DiagonalVerdict::NoSolution;
    } else if (bi == 0.0) {
      choices[i] = {0.0};
    } else {
      choices[i] = {bi / ti, bi / (1.0 + ti)};
      ++out.r;
    }
  }
  if (out.verdict == DiagonalVerdict::NoSolution) {
    out.r = 0;
    return out;
  }
  if (out.r >= 63 || (std::size_t{1} << out.r) > enumeration_cap) return out;

  std::vector<std::size_t> ambiguous;
  for (std::size_t i = 0; i < n; ++i)
    if (choices[i].size() == 2) ambiguous.push_back(i);
  const std::size_t count = std::size_t{1} << out.r;
  out.solutions.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = choices[i][0];
    for (std::size_t a = 0; a < ambiguous.size(); ++a) x[ambiguous[a]] = choices[ambiguous[a]][(mask >> a) & 1u];
    out.solutions.push_back(std::move(x));
  }
  return out;
}

std::vector<Vector> brute_force_solutions(const PwlsProblem& p) {
  const std::size_t n = p.size();
  if (n > kBruteForceMaxOrder)
    throw DimensionTooLarge("brute_force_solutions: order " + std::to_string(n) + " exceeds " +
                            std::to_string(kBruteForceMaxOrder));
  const DenseMatrix t = to_dense(p.matrix());
  const double bscale = 1.0 + norm_inf(p.rhs());
  std::vector<Vector> found;
  const std::size_t count = std::size_t{1} << n;
  for (std::size_t mask = 0; mask < count; ++mask) {
    DenseMatrix a = t;
    for (std::size_t i = 0; i < n; ++i) a(i, i) += static_cast<double>((mask >> i) & 1u);
    Vector y;
    try {
      y = lu_solve(a, p.rhs());
    } catch (const SingularMatrix&) {
      continue;
    }
    // Consistency with the pattern, allowing rounding noise on zero components.
    const double slack = 1e-12 * (1.0 + norm_inf(y));
    bool consistent = true;
    for (std::size_t i = 0; i < n && consistent; ++i)
      consistent = ((mask >> i) & 1u) ? y[i] >= -slack : y[i] <= slack;
    if (!consistent) continue;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(y[i]) <= slack) y[i] = 0.0;
    if (norm_inf(residual(p, y)) > 1e-9 * bscale) continue;
    const bool duplicate = std::any_of(found.begin(), found.end(),
                                       [&](const Vector& z) { return distance_inf(z, y) <= 1e-9 * bscale; });
    if (!duplicate) found.push_back(std::move(y));
  }
  return found;
}

Vector phi_map(const PwlsProblem& p, std::span<const double> x) {
  if (x.size() != p.size()) throw DimensionMismatch("phi_map: length mismatch");
  const Vector ones(p.size(), 1.0);
  Vector rhs = p.rhs();
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= x[i] < 0.0 ? -x[i] : 0.0;
  return lu_solve(add_to_diagonal(p.matrix(), ones), rhs, LuOptions{.fill_reducing_ordering = true});
}

Vector psi_map(const PwlsProblem& p, const Splitting& split, std::span<const double> x) {
  if (x.size() != p.size()) throw DimensionMismatch("psi_map: length mismatch");
  Vector rhs = matvec(split.upper, x);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = p.rhs()[i] - rhs[i] - (x[i] > 0.0 ? x[i] : 0.0);
  return forward_substitution({split.lower, split.diagonal}, rhs);
}

double cycle_residual(const std::vector<Vector>& points, const PwlsProblem& p) {
  if (points.size() < 2) throw InvalidArgument("cycle_residual: need at least two points");
  double worst = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Vector& from = points[k];
    const Vector& to = points[(k + 1) % points.size()];
    if (from.size() != p.size() || to.size() != p.size()) throw DimensionMismatch("cycle_residual: length mismatch");
    Vector r = matvec(p.matrix(), to);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += (from[i] > 0.0 ? to[i] : 0.0) - p.rhs()[i];
    worst = std::max(worst, norm_inf(r));
  }
  return worst;
}

bool check_cycle(const std::vector<Vector>& points, const PwlsProblem& p) {
  return cycle_residual(points, p) <= 1e-9 * (1.0 + norm_inf(p.rhs()));
}

}  // namespace pwls
