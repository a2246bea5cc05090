#include "pwls/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace pwls {

PwlsProblem::PwlsProblem(Matrix t, Vector b) : t_(std::move(t)), b_(std::move(b)) {
  if (rows(t_) != cols(t_)) throw DimensionMismatch("PwlsProblem: T is not square");
  if (rows(t_) != b_.size())
    throw DimensionMismatch("PwlsProblem: T has order " + std::to_string(rows(t_)) + " but b has length " +
                            std::to_string(b_.size()));
  for (double v : b_)
    if (!std::isfinite(v)) throw InvalidArgument("PwlsProblem: non-finite entry in b");
  empty_rows_.assign(b_.size(), 1);
  for (std::size_t i = 0; i < b_.size(); ++i) for_each_in_row(t_, i, [&](std::size_t, double) { empty_rows_[i] = 0; });
}

SignPattern::SignPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto s : bits_)
    if (s > 1) throw InvalidArgument("SignPattern: entries must be 0 or 1");
}

std::size_t SignPatternHash::operator()(const SignPattern& s) const noexcept {
  // FNV-1a over the bits, packed 8 per byte.
  std::size_t h = 1469598103934665603ull;
  std::uint8_t byte = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    byte = static_cast<std::uint8_t>(byte | (s[i] << (i % 8)));
    if (i % 8 == 7 || i + 1 == s.size()) {
      h = (h ^ byte) * 1099511628211ull;
      byte = 0;
    }
  }
  return h ^ s.size();
}

Vector positive_part(std::span<const double> x) {
  Vector out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return v > 0.0 ? v : 0.0; });
  return out;
}

Vector negative_part(std::span<const double> x) {
  Vector out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return v < 0.0 ? -v : 0.0; });
  return out;
}

SignPattern sign_pattern(std::span<const double> x) {
  std::vector<std::uint8_t> s(x.size());
  std::transform(x.begin(), x.end(), s.begin(), [](double v) { return static_cast<std::uint8_t>(v > 0.0); });
  return SignPattern(std::move(s));
}

Vector residual(const PwlsProblem& p, std::span<const double> x) {
  if (x.size() != p.size()) throw DimensionMismatch("residual: x has wrong length");
  Vector f = matvec(p.matrix(), x);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += (x[i] > 0.0 ? x[i] : 0.0) - p.rhs()[i];
  return f;
}

Splitting split_dlu(const Matrix& t) {
  if (rows(t) != cols(t)) throw DimensionMismatch("split_dlu: matrix not square");
  return {diagonal(t), strictly_lower(t), strictly_upper(t)};
}

std::vector<std::size_t> componentwise_certificate(const PwlsProblem& p, std::span<const double> x_prev,
                                                   std::span<const double> x_next) {
  if (x_prev.size() != p.size() || x_next.size() != p.size())
    throw DimensionMismatch("componentwise_certificate: length mismatch");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i)
    if ((x_prev[i] > 0.0) == (x_next[i] > 0.0)) out.push_back(i);
  return out;
}

void validate(const SolveOptions& opts) {
  if (!(opts.tolerance > 0.0)) throw InvalidArgument("SolveOptions: tolerance must be positive");
  if (opts.max_iterations < 1) throw InvalidArgument("SolveOptions: max_iterations must be at least 1");
}

std::string_view status_name(const SolveStatus& s) {
  struct Names {
    std::string_view operator()(const Converged&) const { return "converged"; }
    std::string_view operator()(const CycleDetected&) const { return "cycle_detected"; }
    std::string_view operator()(const MaxIterations&) const { return "max_iterations"; }
    std::string_view operator()(const SingularStep&) const { return "singular_step"; }
  };
  return std::visit(Names{}, s);
}

}  // namespace pwls
