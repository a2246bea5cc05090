#include "pwls/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <thread>

namespace pwls {

namespace {

// Floor for measured times so that ratios stay finite at timer resolution.
constexpr double kMinSeconds = 1e-9;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

BenchRecord run_one(const BenchProblem& bp, Method m, const BenchOptions& opts) {
  BenchRecord rec;
  rec.problem_id = bp.id;
  rec.method = m;
  std::vector<double> times;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, opts.repeats); ++r) {
    const SolveReport rep = solve(bp.problem, m, std::nullopt, opts.solve);
    times.push_back(rep.cpu_seconds);
    rec.status = rep.status;
    rec.iterations = rep.iterations;
    rec.final_residual = rep.final_residual();
  }
  rec.seconds = median(std::move(times));
  return rec;
}

}  // namespace

std::vector<BenchRecord> run_grid(const std::vector<BenchProblem>& problems, const std::vector<Method>& methods,
                                  const BenchOptions& opts) {
  const std::size_t total = problems.size() * methods.size();
  std::vector<BenchRecord> records(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++)
      records[k] = run_one(problems[k / methods.size()], methods[k % methods.size()], opts);
  };
  const std::size_t jobs = std::clamp<std::size_t>(opts.jobs, 1, std::max<std::size_t>(1, total));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  std::stable_sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
    return a.problem_id != b.problem_id ? a.problem_id < b.problem_id : a.method < b.method;
  });
  return records;
}

std::vector<ProfileCurve> performance_profile(const std::vector<BenchRecord>& records) {
  if (records.empty()) throw InvalidArgument("performance_profile: no records");
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Best time per (problem, method); unsolved pairs are infinite.
  std::map<std::string, std::map<Method, double>> times;
  for (const auto& r : records) {
    const double t = r.solved() ? std::max(r.seconds, kMinSeconds) : inf;
    auto [it, inserted] = times[r.problem_id].emplace(r.method, t);
    if (!inserted) it->second = std::min(it->second, t);
  }
  std::vector<Method> methods;
  for (const auto& r : records)
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  std::sort(methods.begin(), methods.end());
  for (const auto& [id, by_method] : times)
    if (by_method.size() != methods.size())
      throw InvalidArgument("performance_profile: problem '" + id + "' lacks a record for some method");

  std::map<Method, std::vector<double>> ratios;
  std::vector<double> taus{1.0};
  for (const auto& [id, by_method] : times) {
    double best = inf;
    for (const auto& [m, t] : by_method) best = std::min(best, t);
    for (const auto& [m, t] : by_method) {
      const double r = std::isfinite(t) ? t / best : inf;
      ratios[m].push_back(r);
      if (std::isfinite(r)) taus.push_back(r);
    }
  }
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

  const double np = static_cast<double>(times.size());
  std::vector<ProfileCurve> curves;
  for (Method m : methods) {
    std::vector<double> r = ratios[m];
    std::sort(r.begin(), r.end());
    ProfileCurve c{m, {}};
    for (double tau : taus) {
      const auto count = std::upper_bound(r.begin(), r.end(), tau) - r.begin();
      c.points.push_back({std::log2(tau), static_cast<double>(count) / np});
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

void write_records_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& records) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot open file for writing");
  out.precision(17);
  out << "problem_id,method,status,iterations,seconds,final_residual\n";
  for (const auto& r : records)
    out << r.problem_id << ',' << method_name(r.method) << ',' << status_name(r.status) << ',' << r.iterations << ','
        << r.seconds << ',' << r.final_residual << '\n';
}

void write_profile_csv(const std::filesystem::path& path, const std::vector<ProfileCurve>& curves) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot open file for writing");
  out.precision(17);
  out << "method,log2_tau,rho\n";
  for (const auto& c : curves)
    for (const auto& p : c.points) out << method_name(c.method) << ',' << p.log2_tau << ',' << p.rho << '\n';
}

}  // namespace pwls
