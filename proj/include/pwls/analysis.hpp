#pragma once

// Solvability conditions, closed-form and exhaustive solution enumeration,
// and the fixed-point maps used to certify existence and uniqueness.

#include <limits>
#include <vector>

#include "pwls/core.hpp"

namespace pwls {

class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

class InvalidDiagonal : public Error {
 public:
  using Error::Error;
};

struct DiagonalDominance {
  bool holds = false;
  /// max_i (1 + sum_{j != i} |t_ij|) / |t_ii|; infinite with a zero diagonal.
  double worst_row_ratio = std::numeric_limits<double>::infinity();
};

struct SassenfeldReport {
  std::vector<double> betas;
  double beta = 0.0;
  bool holds = false;
};

enum class DiagonalVerdict { NoSolution, Solutions };

struct DiagonalClassification {
  DiagonalVerdict verdict = DiagonalVerdict::NoSolution;
  /// Number of indices with b_i > 0 and t_ii in (-1, 0).
  std::size_t r = 0;
  /// All 2^r solutions when 2^r <= the enumeration cap, otherwise empty.
  std::vector<Vector> solutions;
};

DiagonalDominance strong_diagonal_dominance(const Matrix& t);

/// Forward recursion beta_i = (sum_{j<i} |t_ij| beta_j + sum_{j>i} |t_ij| + 1) / |t_ii|.
SassenfeldReport sassenfeld(const Matrix& t);

bool is_spd(const Matrix& t);

/// Requires T diagonal with t_ii not in {0, -1}.
DiagonalClassification diagonal_classify(const Matrix& t, std::span<const double> b,
                                         std::size_t enumeration_cap = std::size_t{1} << 16);

inline constexpr std::size_t kBruteForceMaxOrder = 20;

/// Every solution of the system, found by solving (diag(s) + T) y = b for all
/// 2^n sign patterns s and keeping the consistent ones. Ordered by pattern.
std::vector<Vector> brute_force_solutions(const PwlsProblem& p);

/// (T + I)^{-1} (b - x-)
Vector phi_map(const PwlsProblem& p, std::span<const double> x);

/// (D + L)^{-1} (b - U x - x+)
Vector psi_map(const PwlsProblem& p, const Splitting& split, std::span<const double> x);

/// Largest infinity-norm residual of (P(x_k) + T) x_{k+1} = b around the cycle.
double cycle_residual(const std::vector<Vector>& points, const PwlsProblem& p);

/// True when the points form a Newton cycle, to 1e-9 (1 + ||b||_inf).
bool check_cycle(const std::vector<Vector>& points, const PwlsProblem& p);

}  // namespace pwls
