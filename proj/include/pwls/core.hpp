#pragma once

// The piecewise linear system x+ + T x = b: problem data, the residual map,
// sign patterns and the D + L + U splitting shared by the iterations.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "pwls/linalg.hpp"

namespace pwls {

class PwlsProblem {
 public:
  PwlsProblem(Matrix t, Vector b);

  std::size_t size() const { return b_.size(); }
  const Matrix& matrix() const { return t_; }
  const Vector& rhs() const { return b_; }
  StorageKind storage() const { return storage_kind(t_); }

  /// Rows of T with no stored nonzero. Such an equation reads x_i+ = b_i and
  /// is solved in closed form by every step.
  const std::vector<std::uint8_t>& empty_rows() const { return empty_rows_; }

 private:
  Matrix t_;
  Vector b_;
  std::vector<std::uint8_t> empty_rows_;
};

/// diag(sgn(x+)) stored as its 0/1 diagonal.
class SignPattern {
 public:
  SignPattern() = default;
  explicit SignPattern(std::vector<std::uint8_t> bits);

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  Vector as_vector() const { return {bits_.begin(), bits_.end()}; }

  friend bool operator==(const SignPattern&, const SignPattern&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct SignPatternHash {
  std::size_t operator()(const SignPattern& s) const noexcept;
};

struct Splitting {
  Vector diagonal;
  Matrix lower;
  Matrix upper;
};

Vector positive_part(std::span<const double> x);
Vector negative_part(std::span<const double> x);
SignPattern sign_pattern(std::span<const double> x);

/// F(x) = x+ + T x - b
Vector residual(const PwlsProblem& p, std::span<const double> x);

Splitting split_dlu(const Matrix& t);

/// Indices whose sign did not change between consecutive Newton iterates;
/// at each of them F_i(x_next) vanishes.
std::vector<std::size_t> componentwise_certificate(const PwlsProblem& p, std::span<const double> x_prev,
                                                   std::span<const double> x_next);

// ------------------------------------------------------------ solver report

struct SolveOptions {
  double tolerance = 1e-5;
  std::size_t max_iterations = 1000;
  bool record_trace = false;
  bool cycle_detection = true;
};

/// Throws InvalidArgument when the options violate their ranges.
void validate(const SolveOptions& opts);

struct Converged {};
struct CycleDetected {
  std::size_t length;
};
struct MaxIterations {};
struct SingularStep {
  std::size_t iteration;
  std::size_t row;
};

using SolveStatus = std::variant<Converged, CycleDetected, MaxIterations, SingularStep>;

struct SolveReport {
  SolveStatus status = MaxIterations{};
  Vector x;
  std::size_t iterations = 0;
  /// ||F(x^k)||_2 for k = 0 .. iterations.
  std::vector<double> residual_norms;
  /// sign_pattern(x^k) for every iterate, filled only with record_trace.
  std::vector<SignPattern> pattern_trace;
  /// The iterates x^{j+1} .. x^k of a detected Newton cycle, where x^j and
  /// x^k share a sign pattern.
  std::vector<Vector> cycle_points;
  /// Set when the last two Newton sign patterns coincide.
  bool pattern_certified = false;
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;

  bool converged() const { return std::holds_alternative<Converged>(status); }
  double final_residual() const { return residual_norms.empty() ? 0.0 : residual_norms.back(); }
};

std::string_view status_name(const SolveStatus& s);

}  // namespace pwls
