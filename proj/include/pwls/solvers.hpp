#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "json.hpp"
#include "pwls/core.hpp"

namespace pwls {

enum class Method { Newton, JacobiNewton, GaussSeidelNewton };

inline constexpr Method kAllMethods[] = {Method::Newton, Method::JacobiNewton, Method::GaussSeidelNewton};

/// CLI spelling: newton, jacobi-newton, gs-newton.
std::string_view method_name(Method m);
Method parse_method(std::string_view name);

/// Sparse Newton systems are pre-ordered by approximate minimum degree.
inline constexpr LuOptions kNewtonLu{.drop_tolerance = 1e-14, .fill_reducing_ordering = true};

/// Solves (P(x) + T) y = b. Throws SingularMatrix when P(x) + T is singular.
Vector newton_step(const PwlsProblem& p, std::span<const double> x, const LuOptions& lu = kNewtonLu);

/// Solves the diagonal system (P(x) + D) y = b - (L + U) x.
Vector jacobi_newton_step(const PwlsProblem& p, const Splitting& split, std::span<const double> x);

/// Solves the lower-triangular system (P(x) + D + L) y = b - U x.
Vector gauss_seidel_newton_step(const PwlsProblem& p, const Splitting& split, std::span<const double> x);

/// Runs one of the iterations from x0 (zero when omitted) until
/// ||F(x^k)||_2 <= tolerance, a Newton sign pattern repeats, the iteration
/// budget runs out or a step fails.
SolveReport solve(const PwlsProblem& p, Method method, std::optional<Vector> x0 = std::nullopt,
                  const SolveOptions& opts = {});

nlohmann::json to_json(const SolveReport& report);

}  // namespace pwls
