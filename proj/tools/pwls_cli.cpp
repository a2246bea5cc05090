// Command-line front end. Machine-readable results go to stdout, diagnostics
// to stderr.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pwls/analysis.hpp"
#include "pwls/bench.hpp"
#include "pwls/boussinesq.hpp"
#include "pwls/generators.hpp"
#include "pwls/io.hpp"
#include "pwls/solvers.hpp"
#include "pwls/transforms.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pwls;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kCycle = 2, kMaxIter = 3, kSingular = 4 };

struct ProblemInput {
  std::string manifest;
  std::string matrix;
  std::string rhs;
  std::string storage;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--manifest", manifest, "Problem manifest (JSON naming the matrix and rhs files)");
    cmd->add_option("--matrix", matrix, "Matrix Market file for T");
    cmd->add_option("--rhs", rhs, "Right-hand side vector file");
    cmd->add_option("--storage", storage, "Storage for --matrix: dense, sparse or penta");
  }

  PwlsProblem load() const {
    if (!manifest.empty()) return load_problem(manifest).problem;
    if (matrix.empty() || rhs.empty()) throw InvalidArgument("give --manifest or both --matrix and --rhs");
    std::optional<StorageKind> kind;
    if (!storage.empty()) kind = parse_storage(storage);
    return PwlsProblem(read_matrix_market(matrix, kind), read_vector(rhs));
  }
};

void emit(const json& j, const std::string& out_path = {}) {
  std::cout << j.dump(2) << '\n';
  if (!out_path.empty()) write_json(out_path, j);
}

int exit_code(const SolveStatus& s) {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Converged>) return kOk;
        if constexpr (std::is_same_v<T, CycleDetected>) return kCycle;
        if constexpr (std::is_same_v<T, MaxIterations>) return kMaxIter;
        return kSingular;
      },
      s);
}

// --- solve -------------------------------------------------------------

struct SolveCmd {
  ProblemInput input;
  std::string method = "newton";
  double tol = 1e-5;
  std::size_t max_iter = 1000;
  std::string x0;
  bool trace = false;
  std::string out;

  int run() const {
    const PwlsProblem p = input.load();
    SolveOptions opts;
    opts.tolerance = tol;
    opts.max_iterations = max_iter;
    opts.record_trace = trace;
    std::optional<Vector> start;
    if (!x0.empty()) start = read_vector(x0);
    const SolveReport rep = solve(p, parse_method(method), std::move(start), opts);
    json j = to_json(rep);
    j["method"] = method;
    emit(j, out);
    std::cerr << method << ": " << status_name(rep.status) << " after " << rep.iterations << " iterations, residual "
              << rep.final_residual() << '\n';
    return exit_code(rep.status);
  }
};

// --- analyze -----------------------------------------------------------

struct AnalyzeCmd {
  ProblemInput input;
  bool enumerate = false;
  std::string out;

  int run() const {
    const PwlsProblem p = input.load();
    const Matrix& t = p.matrix();
    json j;
    j["n"] = p.size();
    j["storage"] = std::string(storage_name(p.storage()));
    const DiagonalDominance sdd = strong_diagonal_dominance(t);
    j["sdd"] = {{"holds", sdd.holds}, {"ratio", sdd.worst_row_ratio}};
    try {
      const SassenfeldReport s = sassenfeld(t);
      j["sassenfeld"] = {{"betas", s.betas}, {"beta", s.beta}, {"holds", s.holds}};
    } catch (const ZeroDiagonal& e) {
      j["sassenfeld"] = {{"holds", false}, {"zero_diagonal_row", e.row()}};
    }
    j["spd"] = is_spd(t);
    if (enumerate) {
      const std::vector<Vector> sols = brute_force_solutions(p);
      j["solutions"] = sols;
    }
    emit(j, out);
    return kOk;
  }
};

// --- transform ---------------------------------------------------------

struct TransformCmd {
  ProblemInput input;
  std::string kind;
  std::string out;

  int run() const {
    if (out.empty()) throw InvalidArgument("transform needs --out");
    const PwlsProblem in = input.load();
    json extra;
    fs::path manifest;
    if (kind == "pwls-to-ave") {
      const AveProblem a = pwls_to_ave(in);
      extra["form"] = "ave";
      manifest = save_problem(out, PwlsProblem(a.t_hat, a.b_hat), extra);
    } else if (kind == "ave-to-pwls") {
      extra["form"] = "pwls";
      manifest = save_problem(out, ave_to_pwls({in.matrix(), in.rhs()}), extra);
    } else if (kind == "qp-to-pwls") {
      extra["form"] = "pwls";
      manifest = save_problem(out, qp_to_pwls({in.matrix(), in.rhs()}), extra);
    } else {
      throw InvalidArgument("unknown transform '" + kind + "'");
    }
    emit(read_json(manifest));
    return kOk;
  }
};

// --- generate ----------------------------------------------------------

struct GenerateCmd {
  std::string kind = "dense";
  GenSpec spec;
  std::string out;

  int run() {
    if (out.empty()) throw InvalidArgument("generate needs --out");
    fs::path manifest;
    if (kind == "spd_3cycle" || kind == "diagdom_nosolution") {
      const CanonicalInstance c = canonical(kind);
      fs::create_directories(out);
      json names = json::array();
      for (std::size_t k = 0; k < c.witness.size(); ++k) {
        const std::string name = "witness_" + std::to_string(k) + ".mtx";
        write_vector(fs::path(out) / name, c.witness[k]);
        names.push_back(name);
      }
      manifest = save_problem(out, c.problem, {{"canonical", kind}, {"witness", names}});
    } else {
      spec.kind = parse_kind(kind);
      manifest = save_problem(out, generate(spec), {{"generator", to_json(spec)}});
    }
    emit(read_json(manifest));
    return kOk;
  }
};

// --- bench -------------------------------------------------------------

std::vector<BenchProblem> load_grid(const fs::path& path) {
  const json grid = read_json(path);
  if (!grid.contains("problems") || !grid["problems"].is_array())
    throw ParseError(path.string(), 0, "grid needs a 'problems' array");
  std::vector<BenchProblem> out;
  for (const auto& entry : grid["problems"]) {
    if (!entry.is_object()) throw ParseError(path.string(), 0, "each grid entry must be an object");
    if (entry.contains("manifest")) {
      const fs::path m = path.parent_path() / entry["manifest"].get<std::string>();
      out.push_back({entry.value("id", m.parent_path().filename().string()), load_problem(m).problem});
      continue;
    }
    GenSpec spec = gen_spec_from_json(entry);
    const std::size_t count = entry.value("count", std::size_t{1});
    for (std::size_t k = 0; k < count; ++k) {
      char id[96];
      std::snprintf(id, sizeof id, "%s-n%zu-s%06llu", std::string(kind_name(spec.kind)).c_str(), spec.n,
                    static_cast<unsigned long long>(spec.seed));
      out.push_back({id, generate(spec)});
      ++spec.seed;
    }
  }
  if (out.empty()) throw ParseError(path.string(), 0, "grid lists no problems");
  return out;
}

struct BenchCmd {
  std::string grid;
  std::vector<std::string> methods;
  double tol = 1e-5;
  std::size_t max_iter = 1000;
  std::size_t repeats = 3;
  std::size_t jobs = 1;
  std::string out;

  int run() const {
    if (out.empty()) throw InvalidArgument("bench needs --out");
    const std::vector<BenchProblem> problems = load_grid(grid);
    std::vector<Method> ms;
    for (const auto& m : methods) ms.push_back(parse_method(m));
    if (ms.empty()) ms.assign(std::begin(kAllMethods), std::end(kAllMethods));
    BenchOptions opts;
    opts.solve.tolerance = tol;
    opts.solve.max_iterations = max_iter;
    opts.repeats = repeats;
    opts.jobs = jobs;
    std::cerr << "bench: " << problems.size() << " problems x " << ms.size() << " methods\n";
    const auto records = run_grid(problems, ms, opts);
    const auto curves = performance_profile(records);
    fs::create_directories(out);
    write_records_csv(fs::path(out) / "records.csv", records);
    write_profile_csv(fs::path(out) / "profile.csv", curves);
    json summary;
    summary["records"] = records.size();
    for (const auto& c : curves) {
      std::size_t solved = 0;
      for (const auto& r : records) solved += r.method == c.method && r.solved();
      summary["methods"].push_back({{"method", std::string(method_name(c.method))},
                                    {"solved", solved},
                                    {"rho_at_1", c.points.front().rho}});
    }
    summary["records_csv"] = (fs::path(out) / "records.csv").string();
    summary["profile_csv"] = (fs::path(out) / "profile.csv").string();
    emit(summary);
    return kOk;
  }
};

// --- boussinesq --------------------------------------------------------

struct BoussinesqCmd {
  AquiferConfig cfg;
  std::string method = "newton";
  std::string warm_start = "previous-day";
  double tol = 1e-5;
  std::size_t max_iter = 1000;
  std::string out;

  int run() const {
    WarmStart warm = PreviousDay{};
    if (warm_start.rfind("refine:", 0) == 0)
      warm = RefinedCoarse{read_levels(warm_start.substr(7))};
    else if (warm_start != "previous-day")
      throw InvalidArgument("--warm-start must be previous-day or refine:<path>");
    SolveOptions opts;
    opts.tolerance = tol;
    opts.max_iterations = max_iter;
    const std::vector<DayResult> days = run_simulation(cfg, parse_method(method), warm, opts);

    json j;
    j["N"] = cfg.N;
    j["method"] = method;
    j["initial_volume"] = water_volume(cfg, initial_state(cfg));
    bool all_converged = true;
    for (const auto& d : days) {
      all_converged = all_converged && d.report.converged();
      j["days"].push_back({{"day", d.state.day},
                           {"status", std::string(status_name(d.report.status))},
                           {"iterations", d.report.iterations},
                           {"final_residual", d.report.final_residual()},
                           {"volume", d.volume},
                           {"timing", {{"wall_seconds", d.report.wall_seconds}, {"cpu_seconds", d.report.cpu_seconds}}}});
      std::cerr << "day " << d.state.day << ": " << status_name(d.report.status) << ", " << d.report.iterations
                << " iterations, volume " << d.volume << '\n';
    }
    if (!out.empty()) {
      fs::create_directories(out);
      write_json(fs::path(out) / "days.json", j);
      write_json(fs::path(out) / "levels.json", levels_to_json(cfg, days));
      write_radial_profile_csv(fs::path(out) / "profile.csv", cfg, days);
    }
    emit(j);
    return all_converged ? kOk : kMaxIter;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvers for the piecewise linear system x+ + Tx = b"};
  app.require_subcommand(1);

  SolveCmd solve_cmd;
  auto* s = app.add_subcommand("solve", "Solve a problem and print the JSON report");
  solve_cmd.input.add_to(s);
  s->add_option("--method", solve_cmd.method, "newton, jacobi-newton or gs-newton")->capture_default_str();
  s->add_option("--tol", solve_cmd.tol, "Residual 2-norm tolerance")->capture_default_str();
  s->add_option("--max-iter", solve_cmd.max_iter, "Iteration budget")->capture_default_str();
  s->add_option("--x0", solve_cmd.x0, "Starting point vector file");
  s->add_flag("--trace", solve_cmd.trace, "Record the sign pattern of every iterate");
  s->add_option("--out", solve_cmd.out, "Also write the report to this file");

  AnalyzeCmd analyze_cmd;
  auto* a = app.add_subcommand("analyze", "Report sufficient conditions for convergence");
  analyze_cmd.input.add_to(a);
  a->add_flag("--enumerate", analyze_cmd.enumerate, "List every solution by sign-pattern enumeration (n <= 20)");
  a->add_option("--out", analyze_cmd.out, "Also write the report to this file");

  TransformCmd transform_cmd;
  auto* t = app.add_subcommand("transform", "Convert between PWLS, AVE and QP forms");
  transform_cmd.input.add_to(t);
  t->add_option("--kind", transform_cmd.kind, "pwls-to-ave, ave-to-pwls or qp-to-pwls")->required();
  t->add_option("--out", transform_cmd.out, "Output bundle directory")->required();

  GenerateCmd generate_cmd;
  auto* g = app.add_subcommand("generate", "Write a seeded random or canonical instance");
  g->add_option("--kind", generate_cmd.kind, "dense, sparse, spd, diagonal, spd_3cycle or diagdom_nosolution")
      ->capture_default_str();
  g->add_option("--n", generate_cmd.spec.n, "Order")->capture_default_str();
  g->add_option("--seed", generate_cmd.spec.seed, "Random seed")->capture_default_str();
  g->add_option("--density", generate_cmd.spec.density, "Off-diagonal fill fraction (sparse)")->capture_default_str();
  g->add_option("--diag-offset", generate_cmd.spec.diag_offset, "Diagonal margin over the off-diagonal row sum")
      ->capture_default_str();
  g->add_option("--offdiag-scale", generate_cmd.spec.offdiag_scale, "Off-diagonal magnitude bound")
      ->capture_default_str();
  g->add_option("--out", generate_cmd.out, "Output bundle directory")->required();

  BenchCmd bench_cmd;
  auto* b = app.add_subcommand("bench", "Time a method-by-problem grid and write performance profiles");
  b->add_option("--grid", bench_cmd.grid, "Grid specification (JSON)")->required();
  b->add_option("--method", bench_cmd.methods, "Methods to run (default: all)");
  b->add_option("--tol", bench_cmd.tol, "Residual 2-norm tolerance")->capture_default_str();
  b->add_option("--max-iter", bench_cmd.max_iter, "Iteration budget")->capture_default_str();
  b->add_option("--repeats", bench_cmd.repeats, "Timed runs per pair; the median is kept")->capture_default_str();
  b->add_option("--jobs", bench_cmd.jobs, "Worker threads")->capture_default_str();
  b->add_option("--out", bench_cmd.out, "Directory for records.csv and profile.csv")->required();

  BoussinesqCmd bous_cmd;
  auto* w = app.add_subcommand("boussinesq", "Simulate the draining paraboloid aquifer");
  w->add_option("--N", bous_cmd.cfg.N, "Half grid size; the grid has (2N+1)^2 nodes")->capture_default_str();
  w->add_option("--days", bous_cmd.cfg.days, "Simulated days")->capture_default_str();
  w->add_option("--method", bous_cmd.method, "newton, jacobi-newton or gs-newton")->capture_default_str();
  w->add_option("--warm-start", bous_cmd.warm_start, "previous-day or refine:<levels.json>")->capture_default_str();
  w->add_option("--q", bous_cmd.cfg.q, "Sink outflow (m^3/s)")->capture_default_str();
  w->add_option("--tol", bous_cmd.tol, "Residual 2-norm tolerance")->capture_default_str();
  w->add_option("--max-iter", bous_cmd.max_iter, "Iteration budget per day")->capture_default_str();
  w->add_option("--out", bous_cmd.out, "Directory for days.json, levels.json and profile.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*s) return solve_cmd.run();
    if (*a) return analyze_cmd.run();
    if (*t) return transform_cmd.run();
    if (*g) return generate_cmd.run();
    if (*b) return bench_cmd.run();
    if (*w) return bous_cmd.run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
