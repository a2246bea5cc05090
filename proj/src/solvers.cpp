#include "pwls/solvers.hpp"

#include <ctime>
#include <string>
#include <unordered_map>

namespace pwls {

namespace {

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

void check_length(const PwlsProblem& p, std::span<const double> x, const char* what) {
  if (x.size() != p.size())
    throw DimensionMismatch(std::string(what) + ": x has length " + std::to_string(x.size()) + ", expected " +
                            std::to_string(p.size()));
}

// sgn(x_i+) added to the diagonal; an empty row gets 1 so that its equation
// x_i+ = b_i is answered by x_i = b_i.
Vector newton_shift(const PwlsProblem& p, std::span<const double> x) {
  Vector shift(x.size());
  const auto& empty = p.empty_rows();
  for (std::size_t i = 0; i < x.size(); ++i) shift[i] = (x[i] > 0.0 || empty[i]) ? 1.0 : 0.0;
  return shift;
}

Vector shifted_diagonal(const PwlsProblem& p, const Splitting& split, std::span<const double> x) {
  Vector d = newton_shift(p, x);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = p.empty_rows()[i] ? 1.0 : d[i] + split.diagonal[i];
  return d;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Newton: return "newton";
    case Method::JacobiNewton: return "jacobi-newton";
    case Method::GaussSeidelNewton: return "gs-newton";
  }
  return "newton";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (method_name(m) == name) return m;
  throw InvalidArgument("unknown method '" + std::string(name) + "' (expected newton, jacobi-newton or gs-newton)");
}

Vector newton_step(const PwlsProblem& p, std::span<const double> x, const LuOptions& lu) {
  check_length(p, x, "newton_step");
  const Vector shift = newton_shift(p, x);
  return lu_solve(add_to_diagonal(p.matrix(), shift), p.rhs(), lu);
}

Vector jacobi_newton_step(const PwlsProblem& p, const Splitting& split, std::span<const double> x) {
  check_length(p, x, "jacobi_newton_step");
  const Vector lx = matvec(split.lower, x);
  const Vector ux = matvec(split.upper, x);
  Vector rhs(p.rhs());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= lx[i] + ux[i];
  return diagonal_solve(shifted_diagonal(p, split, x), rhs);
}

Vector gauss_seidel_newton_step(const PwlsProblem& p, const Splitting& split, std::span<const double> x) {
  check_length(p, x, "gauss_seidel_newton_step");
  const Vector ux = matvec(split.upper, x);
  Vector rhs(p.rhs());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= ux[i];
  const Vector d = shifted_diagonal(p, split, x);
  return forward_substitution({split.lower, d}, rhs);
}

SolveReport solve(const PwlsProblem& p, Method method, std::optional<Vector> x0, const SolveOptions& opts) {
  validate(opts);
  const auto wall_start = std::chrono::steady_clock::now();
  const double cpu_start = thread_cpu_seconds();

  SolveReport report;
  Vector x = x0 ? std::move(*x0) : Vector(p.size(), 0.0);
  check_length(p, x, "solve");

  std::optional<Splitting> split;
  if (method != Method::Newton) split = split_dlu(p.matrix());
  const bool detect = method == Method::Newton && opts.cycle_detection;

  std::unordered_map<SignPattern, std::size_t, SignPatternHash> seen;
  std::vector<Vector> iterates;
  SignPattern pattern = sign_pattern(x);
  if (detect) {
    seen.emplace(pattern, 0);
    iterates.push_back(x);
  }
  if (opts.record_trace) report.pattern_trace.push_back(pattern);
  report.residual_norms.push_back(norm2(residual(p, x)));

  if (report.residual_norms.back() <= opts.tolerance) {
    report.status = Converged{};
  } else {
    report.status = MaxIterations{};
    for (std::size_t k = 1; k <= opts.max_iterations; ++k) {
      Vector next;
      try {
        switch (method) {
          case Method::Newton: next = newton_step(p, x); break;
          case Method::JacobiNewton: next = jacobi_newton_step(p, *split, x); break;
          case Method::GaussSeidelNewton: next = gauss_seidel_newton_step(p, *split, x); break;
        }
      } catch (const SingularMatrix& e) {
        report.status = SingularStep{k, e.index()};
        break;
      } catch (const ZeroDiagonal& e) {
        report.status = SingularStep{k, e.row()};
        break;
      }
      x = std::move(next);
      report.iterations = k;
      SignPattern next_pattern = sign_pattern(x);
      if (method == Method::Newton) report.pattern_certified = next_pattern == pattern;
      pattern = std::move(next_pattern);
      if (opts.record_trace) report.pattern_trace.push_back(pattern);
      report.residual_norms.push_back(norm2(residual(p, x)));
      if (report.residual_norms.back() <= opts.tolerance) {
        report.status = Converged{};
        break;
      }
      if (detect) {
        auto [it, inserted] = seen.emplace(pattern, k);
        if (!inserted) {
          const std::size_t first = it->second;
          // A repeat at lag 1 is a fixed point of the step that the tolerance
          // rejects; further steps reproduce it.
          if (k - first >= 2) {
            report.status = CycleDetected{k - first};
            // x^{first+1} .. x^k are all step outputs, so the cycle closes
            // exactly even when x^first was an arbitrary starting point.
            report.cycle_points.assign(iterates.begin() + static_cast<std::ptrdiff_t>(first + 1), iterates.end());
            report.cycle_points.push_back(x);
          }
          break;
        }
        iterates.push_back(x);
      }
    }
  }

  report.x = std::move(x);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  report.cpu_seconds = thread_cpu_seconds() - cpu_start;
  return report;
}

nlohmann::json to_json(const SolveReport& report) {
  nlohmann::json j;
  j["status"] = std::string(status_name(report.status));
  j["iterations"] = report.iterations;
  j["final_residual"] = report.final_residual();
  j["residual_norms"] = report.residual_norms;
  j["pattern_certified"] = report.pattern_certified;
  if (const auto* c = std::get_if<CycleDetected>(&report.status)) {
    j["cycle_length"] = c->length;
    j["cycle_points"] = report.cycle_points;
  }
  if (const auto* s = std::get_if<SingularStep>(&report.status)) {
    j["singular_iteration"] = s->iteration;
    j["singular_row"] = s->row;
  }
  if (!report.pattern_trace.empty()) {
    auto& trace = j["pattern_trace"] = nlohmann::json::array();
    for (const auto& s : report.pattern_trace) trace.push_back(s.bits());
  }
  j["x"] = report.x;
  j["timing"] = {{"wall_seconds", report.wall_seconds}, {"cpu_seconds", report.cpu_seconds}};
  return j;
}

}  // namespace pwls
