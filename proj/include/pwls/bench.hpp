#pragma once

// Method-by-problem timing grids and Dolan-More performance profiles.

#include <filesystem>
#include <string>
#include <vector>

#include "pwls/solvers.hpp"

namespace pwls {

struct BenchProblem {
  std::string id;
  PwlsProblem problem;
};

struct BenchRecord {
  std::string problem_id;
  Method method = Method::Newton;
  SolveStatus status = MaxIterations{};
  std::size_t iterations = 0;
  /// Median thread CPU time over the repeats.
  double seconds = 0.0;
  double final_residual = 0.0;

  bool solved() const { return std::holds_alternative<Converged>(status); }
};

struct ProfilePoint {
  double log2_tau;
  double rho;
};

struct ProfileCurve {
  Method method;
  std::vector<ProfilePoint> points;
};

struct BenchOptions {
  SolveOptions solve;
  std::size_t repeats = 3;
  /// Worker threads; each timed solve runs alone on its worker.
  std::size_t jobs = 1;
};

/// One record per (problem, method), sorted by problem id then method.
std::vector<BenchRecord> run_grid(const std::vector<BenchProblem>& problems, const std::vector<Method>& methods,
                                  const BenchOptions& opts = {});

/// ratio r_pm = t_pm / min_m t_pm (infinite for unsolved pairs) and
/// rho_m(tau) = |{p : r_pm <= tau}| / |P| on the shared grid of observed
/// finite ratios. Throws InvalidArgument on empty input.
std::vector<ProfileCurve> performance_profile(const std::vector<BenchRecord>& records);

/// records.csv columns: problem_id,method,status,iterations,seconds,final_residual
void write_records_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& records);
/// profile.csv columns: method,log2_tau,rho
void write_profile_csv(const std::filesystem::path& path, const std::vector<ProfileCurve>& curves);

}  // namespace pwls
