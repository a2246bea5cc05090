#pragma once

// Implicit finite-difference discretization of the Boussinesq model for a
// phreatic aquifer shaped as a paraboloid of revolution, with a point sink at
// the centre. Each simulated day is one piecewise linear system in the
// variable x = h + eta.

#include <filesystem>
#include <optional>
#include <vector>

#include "json.hpp"
#include "pwls/solvers.hpp"

namespace pwls {

struct AquiferConfig {
  double L = 1000.0;
  double depth = 10.0;
  double epsilon = 0.4;
  double kappa = 1.0;
  double dt = 86400.0;
  double q = 10.0;
  std::size_t N = 25;
  std::size_t days = 7;

  std::size_t side() const { return 2 * N + 1; }
  std::size_t nodes() const { return side() * side(); }
  double dx() const { return L / static_cast<double>(N); }
  /// Grid coordinate of index i in [0, 2N].
  double coord(std::size_t i) const { return -L + static_cast<double>(i) * dx(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * side() + j; }
};

/// Throws InvalidArgument unless every field is positive (q may be zero).
void validate(const AquiferConfig& cfg);

struct AquiferState {
  std::size_t day = 0;
  Vector h;
  Vector eta;
  Vector H;
};

struct DayResult {
  AquiferState state;
  SolveReport report;
  double volume = 0.0;
};

/// Distance from the reference level down to the aquifer bottom, clamped to
/// zero outside the rim.
Vector bottom_elevation(const AquiferConfig& cfg);

/// Day-zero state: eta = 0 and H = h.
AquiferState initial_state(const AquiferConfig& cfg);

struct AssembledDay {
  PwlsProblem problem;
  std::size_t grid_side;
};

AssembledDay assemble_day(const AquiferConfig& cfg, const AquiferState& state);

/// Solves the day after `state`. `x0` defaults to h + eta of `state`.
DayResult step_day(const AquiferConfig& cfg, const AquiferState& state, Method method,
                   const SolveOptions& opts = {}, std::optional<Vector> x0 = std::nullopt);

double water_volume(const AquiferConfig& cfg, const AquiferState& state);

/// Prolongs a field on the (2N+1)^2 grid to the (4N+1)^2 grid.
Vector interpolate_refine(std::span<const double> coarse, std::size_t coarse_N, std::size_t target_N);

/// Water levels eta for days 1..k on a coarse grid, used to warm-start a
/// finer run. JSON layout: {"N": n, "days": [[eta...], ...]}.
struct CoarseLevels {
  std::size_t N = 0;
  std::vector<Vector> days;
};

CoarseLevels read_levels(const std::filesystem::path& path);
nlohmann::json levels_to_json(const AquiferConfig& cfg, const std::vector<DayResult>& days);

struct PreviousDay {};
struct RefinedCoarse {
  CoarseLevels levels;
};
using WarmStart = std::variant<PreviousDay, RefinedCoarse>;

/// Simulates days 1..cfg.days from eta = 0. Days without a coarse level fall
/// back to the previous day.
std::vector<DayResult> run_simulation(const AquiferConfig& cfg, Method method, const WarmStart& warm = PreviousDay{},
                                      const SolveOptions& opts = {});

/// Cut along y = 0: columns day,x,h,eta,H for day 0 and each simulated day.
void write_radial_profile_csv(const std::filesystem::path& path, const AquiferConfig& cfg,
                              const std::vector<DayResult>& days);

}  // namespace pwls
