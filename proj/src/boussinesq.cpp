#include "pwls/boussinesq.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "pwls/io.hpp"

namespace pwls {

void validate(const AquiferConfig& cfg) {
  if (!(cfg.L > 0 && cfg.depth > 0 && cfg.epsilon > 0 && cfg.kappa > 0 && cfg.dt > 0 && cfg.q >= 0))
    throw InvalidArgument("AquiferConfig: L, depth, epsilon, kappa and dt must be positive and q nonnegative");
  if (cfg.N < 1) throw InvalidArgument("AquiferConfig: N must be at least 1");
}

Vector bottom_elevation(const AquiferConfig& cfg) {
  validate(cfg);
  const std::size_t m = cfg.side();
  Vector h(cfg.nodes());
  const double l2 = cfg.L * cfg.L;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double x = cfg.coord(i), y = cfg.coord(j);
      h[cfg.index(i, j)] = std::max(0.0, cfg.depth * (1.0 - (x * x + y * y) / l2));
    }
  return h;
}

AquiferState initial_state(const AquiferConfig& cfg) {
  AquiferState s;
  s.h = bottom_elevation(cfg);
  s.eta.assign(s.h.size(), 0.0);
  s.H = s.h;
  return s;
}

AssembledDay assemble_day(const AquiferConfig& cfg, const AquiferState& state) {
  validate(cfg);
  const std::size_t m = cfg.side(), n = cfg.nodes();
  if (state.h.size() != n || state.H.size() != n)
    throw DimensionMismatch("assemble_day: state does not match the configured grid");
  const double dx = cfg.dx();
  const double scale = cfg.kappa * cfg.dt / (cfg.epsilon * dx * dx);
  const Vector& H = state.H;

  Vector diag(n, 0.0), off1(n - 1, 0.0), offm(n - m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = cfg.index(i, j);
      if (j + 1 < m) {
        const double c = scale * 0.5 * (H[k] + H[k + 1]);
        off1[k] = -c;
        diag[k] += c;
        diag[k + 1] += c;
      }
      if (i + 1 < m) {
        const double c = scale * 0.5 * (H[k] + H[k + m]);
        offm[k] = -c;
        diag[k] += c;
        diag[k + m] += c;
      }
    }
  PentaBandMatrix t = PentaBandMatrix::symmetric(m, std::move(diag), std::move(off1), std::move(offm));

  Vector b = matvec(t, state.h);
  for (std::size_t k = 0; k < n; ++k) b[k] += H[k];
  b[cfg.index(cfg.N, cfg.N)] -= cfg.dt / cfg.epsilon * cfg.q / (dx * dx);
  return {PwlsProblem(std::move(t), std::move(b)), m};
}

double water_volume(const AquiferConfig& cfg, const AquiferState& state) {
  double s = 0.0;
  for (double v : state.H) s += v;
  return cfg.epsilon * s * cfg.dx() * cfg.dx();
}

DayResult step_day(const AquiferConfig& cfg, const AquiferState& state, Method method, const SolveOptions& opts,
                   std::optional<Vector> x0) {
  const AssembledDay day = assemble_day(cfg, state);
  if (!x0) {
    x0 = state.h;
    for (std::size_t k = 0; k < x0->size(); ++k) (*x0)[k] += state.eta[k];
  }
  DayResult r;
  r.report = solve(day.problem, method, std::move(x0), opts);
  r.state.day = state.day + 1;
  r.state.h = state.h;
  r.state.eta.resize(state.h.size());
  for (std::size_t k = 0; k < state.h.size(); ++k) r.state.eta[k] = r.report.x[k] - state.h[k];
  r.state.H = positive_part(r.report.x);
  r.volume = water_volume(cfg, r.state);
  return r;
}

Vector interpolate_refine(std::span<const double> coarse, std::size_t coarse_N, std::size_t target_N) {
  const std::size_t mc = 2 * coarse_N + 1;
  if (target_N != 2 * coarse_N) throw DimensionMismatch("interpolate_refine: target N must be twice the source N");
  if (coarse.size() != mc * mc) throw DimensionMismatch("interpolate_refine: field does not match the source grid");
  const std::size_t mf = 2 * target_N + 1;
  auto at = [&](std::size_t i, std::size_t j) { return coarse[i * mc + j]; };
  Vector fine(mf * mf);
  for (std::size_t I = 0; I < mf; ++I)
    for (std::size_t J = 0; J < mf; ++J) {
      const std::size_t i0 = I / 2, j0 = J / 2;
      const bool odd_i = I % 2, odd_j = J % 2;
      double v;
      if (!odd_i && !odd_j)
        v = at(i0, j0);
      else if (odd_i && !odd_j)
        v = 0.5 * (at(i0, j0) + at(i0 + 1, j0));
      else if (!odd_i)
        v = 0.5 * (at(i0, j0) + at(i0, j0 + 1));
      else
        v = 0.25 * (at(i0, j0) + at(i0 + 1, j0) + at(i0, j0 + 1) + at(i0 + 1, j0 + 1));
      fine[I * mf + J] = v;
    }
  return fine;
}

CoarseLevels read_levels(const std::filesystem::path& path) {
  const nlohmann::json j = read_json(path);
  CoarseLevels lv;
  try {
    lv.N = j.at("N").get<std::size_t>();
    lv.days = j.at("days").get<std::vector<Vector>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  const std::size_t mc = 2 * lv.N + 1;
  for (const auto& d : lv.days)
    if (d.size() != mc * mc) throw ParseError(path.string(), 0, "level field does not match N");
  return lv;
}

nlohmann::json levels_to_json(const AquiferConfig& cfg, const std::vector<DayResult>& days) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& d : days) levels.push_back(d.state.eta);
  return {{"N", cfg.N}, {"days", std::move(levels)}};
}

std::vector<DayResult> run_simulation(const AquiferConfig& cfg, Method method, const WarmStart& warm,
                                      const SolveOptions& opts) {
  validate(cfg);
  const auto* refined = std::get_if<RefinedCoarse>(&warm);
  if (refined && 2 * refined->levels.N != cfg.N)
    throw DimensionMismatch("run_simulation: coarse levels must come from a grid with half the N");
  std::vector<DayResult> out;
  AquiferState state = initial_state(cfg);
  for (std::size_t l = 0; l < cfg.days; ++l) {
    std::optional<Vector> x0;
    if (refined && l < refined->levels.days.size()) {
      x0 = interpolate_refine(refined->levels.days[l], refined->levels.N, cfg.N);
      for (std::size_t k = 0; k < x0->size(); ++k) (*x0)[k] += state.h[k];
    }
    out.push_back(step_day(cfg, state, method, opts, std::move(x0)));
    state = out.back().state;
  }
  return out;
}

void write_radial_profile_csv(const std::filesystem::path& path, const AquiferConfig& cfg,
                              const std::vector<DayResult>& days) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot open file for writing");
  out.precision(12);
  out << "day,x,h,eta,H\n";
  auto emit = [&](const AquiferState& s) {
    for (std::size_t i = 0; i < cfg.side(); ++i) {
      const std::size_t k = cfg.index(i, cfg.N);
      out << s.day << ',' << cfg.coord(i) << ',' << s.h[k] << ',' << s.eta[k] << ',' << s.H[k] << '\n';
    }
  };
  emit(initial_state(cfg));
  for (const auto& d : days) emit(d.state);
}

}  // namespace pwls
