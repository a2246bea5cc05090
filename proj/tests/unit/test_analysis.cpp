#include <Eigen/Dense>

#include "doctest.h"
#include "helpers.hpp"
#include "pwls/analysis.hpp"
#include "pwls/generators.hpp"
#include "pwls/solvers.hpp"

using namespace pwls;
using namespace pwls::test;

namespace {

PwlsProblem diag_problem(Vector t, Vector b) {
  const std::size_t n = t.size();
  std::vector<Triplet> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back({i, i, t[i]});
  return PwlsProblem(SparseMatrix::from_triplets(n, n, e), std::move(b));
}

double lambda_min(const DenseMatrix& t) {
  const std::size_t n = t.rows();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = t(i, j);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}

std::vector<Vector> sorted(std::vector<Vector> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("strong diagonal dominance") {
  const PwlsProblem g = gen_dense_sdd({.n = 20, .seed = 3});
  const DiagonalDominance d = strong_diagonal_dominance(g.matrix());
  CHECK(d.holds);
  CHECK(d.worst_row_ratio < 1.0);

  const CanonicalInstance c = canonical("spd_3cycle");
  const DiagonalDominance e = strong_diagonal_dominance(c.problem.matrix());
  CHECK_FALSE(e.holds);
  CHECK(e.worst_row_ratio >= (1 + 0.47) / 0.32 - 1e-12);

  const DiagonalDominance id = strong_diagonal_dominance(DenseMatrix::identity(3));
  CHECK_FALSE(id.holds);
  CHECK(id.worst_row_ratio == 1.0);

  const DiagonalDominance z = strong_diagonal_dominance(DenseMatrix::from_rows({{0, 1}, {1, 5}}));
  CHECK_FALSE(z.holds);
  CHECK(std::isinf(z.worst_row_ratio));
}

TEST_CASE("sassenfeld examples") {
  const SassenfeldReport a = sassenfeld(SparseMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {1, 1, 4.0}}));
  CHECK(a.betas == Vector{0.5, 0.25});
  CHECK(a.beta == 0.5);
  CHECK(a.holds);

  const SassenfeldReport b = sassenfeld(DenseMatrix::from_rows({{2, 0.5}, {0.5, 2}}));
  CHECK(b.betas == Vector{0.75, 0.6875});
  CHECK(b.holds);

  CHECK_THROWS_AS(sassenfeld(DenseMatrix::from_rows({{1, 0}, {0, 0}})), ZeroDiagonal);
}

TEST_CASE("strong dominance implies sassenfeld but not conversely") {
  Rng rng(31);
  int dominant = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 6;
    DenseMatrix t = random_dense(rng, n, n);
    for (std::size_t i = 0; i < n; ++i) t(i, i) = rng.uniform(0.5, 6.0) * (trial % 2 ? 1 : -1);
    if (strong_diagonal_dominance(t).holds) {
      ++dominant;
      CHECK(sassenfeld(t).holds);
    }
  }
  CHECK(dominant > 20);
  // Row 2 fails dominance ((1 + 3) / 2 = 2) but beta_2 = (3 * 0.25 + 1) / 2 < 1.
  const DenseMatrix w = DenseMatrix::from_rows({{8, 1}, {3, 2}});
  CHECK_FALSE(strong_diagonal_dominance(w).holds);
  CHECK(sassenfeld(w).holds);
}

TEST_CASE("is_spd") {
  CHECK(is_spd(canonical("spd_3cycle").problem.matrix()));
  CHECK_FALSE(is_spd(DenseMatrix::from_rows({{-1, 0}, {0, -1}})));
  CHECK_FALSE(is_spd(DenseMatrix::from_rows({{2, 1}, {3, 4}})));
  CHECK_FALSE(is_spd(DenseMatrix::from_rows({{1, 2}, {2, 1}})));
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    CHECK(is_spd(gen_spd({.n = 9, .kind = GenKind::SPD, .seed = seed}).matrix()));
}

TEST_CASE("diagonal classification examples") {
  const auto two = diagonal_classify(SparseMatrix::from_triplets(1, 1, {{0, 0, -0.5}}), Vector{1});
  CHECK(two.verdict == DiagonalVerdict::Solutions);
  CHECK(two.r == 1);
  CHECK(sorted(two.solutions) == std::vector<Vector>{{-2}, {2}});

  const auto none = diagonal_classify(SparseMatrix::from_triplets(1, 1, {{0, 0, -0.5}}), Vector{-1});
  CHECK(none.verdict == DiagonalVerdict::NoSolution);
  CHECK(none.solutions.empty());

  const auto one = diagonal_classify(SparseMatrix::from_triplets(1, 1, {{0, 0, 2.0}}), Vector{3});
  CHECK(one.solutions == std::vector<Vector>{{1.0}});

  CHECK_THROWS_AS(diagonal_classify(SparseMatrix::from_triplets(1, 1, {{0, 0, -1.0}}), Vector{1}), InvalidDiagonal);
  CHECK_THROWS_AS(diagonal_classify(DenseMatrix::from_rows({{1, 1}, {0, 1}}), Vector{1, 1}), InvalidArgument);
}

TEST_CASE("diagonal classification agrees with brute force") {
  Rng rng(41);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t n = 1 + seed % 10;
    const PwlsProblem p = gen_diagonal({.n = n, .kind = GenKind::Diagonal, .seed = seed});
    const auto cls = diagonal_classify(p.matrix(), p.rhs());
    const auto brute = brute_force_solutions(p);
    CHECK((cls.verdict == DiagonalVerdict::NoSolution) == brute.empty());
    if (cls.verdict == DiagonalVerdict::Solutions) {
      CHECK(cls.solutions.size() == (std::size_t{1} << cls.r));
      const auto a = sorted(cls.solutions), b = sorted(brute);
      REQUIRE(a.size() == b.size());
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(distance_inf(a[k], b[k]) <= 1e-12);
      for (const auto& x : cls.solutions) CHECK(norm_inf(residual(p, x)) <= 1e-12 * (1 + norm_inf(p.rhs())));
    }
  }
}

TEST_CASE("brute force oracle") {
  CHECK(brute_force_solutions(canonical("diagdom_nosolution").problem).empty());
  CHECK(brute_force_solutions(canonical("spd_3cycle").problem).size() == 1);
  CHECK(sorted(brute_force_solutions(diag_problem({-0.5}, {1}))) == std::vector<Vector>{{-2}, {2}});
  CHECK_THROWS_AS(brute_force_solutions(PwlsProblem(DenseMatrix::identity(21), Vector(21, 0.0))), DimensionTooLarge);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const PwlsProblem p = gen_dense_sdd({.n = 5, .seed = seed});
    CHECK(brute_force_solutions(p).size() == 1);
  }
}

TEST_CASE("unique solution for sassenfeld matrices equals the gauss-seidel limit") {
  Rng rng(43);
  int tested = 0;
  for (int trial = 0; trial < 400 && tested < 60; ++trial) {
    const std::size_t n = 2 + trial % 9;
    DenseMatrix t = random_dense(rng, n, n);
    for (std::size_t i = 0; i < n; ++i) t(i, i) = rng.uniform(1.5, 5.0);
    if (!sassenfeld(t).holds) continue;
    ++tested;
    const PwlsProblem p(t, random_vector(rng, n));
    const auto sols = brute_force_solutions(p);
    REQUIRE(sols.size() == 1);
    const SolveReport r = solve(p, Method::GaussSeidelNewton, std::nullopt, {.tolerance = 1e-12});
    REQUIRE(r.converged());
    CHECK(distance_inf(r.x, sols[0]) <= 1e-6);
  }
  CHECK(tested >= 30);
}

TEST_CASE("phi map") {
  const PwlsProblem id(DenseMatrix::identity(2), Vector{2, -1});
  CHECK(phi_map(id, Vector{1, -1}) == Vector{1, -1});
  Rng rng(51);
  const PwlsProblem p = gen_spd({.n = 4, .kind = GenKind::SPD, .seed = 2});
  const Vector x = random_vector(rng, 4, 0, 3);
  Vector y = x;
  for (double& v : y) v *= 2;
  CHECK(phi_map(p, x) == phi_map(p, y));
}

TEST_CASE("phi is a contraction with factor 1 / (lambda_min + 1)") {
  Rng rng(53);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 2 + seed % 9;
    const PwlsProblem p = gen_spd({.n = n, .kind = GenKind::SPD, .seed = seed});
    const double factor = 1.0 / (lambda_min(to_dense(p.matrix())) + 1.0);
    for (int k = 0; k < 50; ++k) {
      const Vector x = random_vector(rng, n, -3, 3), y = random_vector(rng, n, -3, 3);
      const double q = norm2(sub(phi_map(p, x), phi_map(p, y))) / norm2(sub(x, y));
      CHECK(q <= factor + 1e-10);
    }
    // Fixed-point iteration reaches the unique solution.
    Vector x(n, 0.0);
    for (int it = 0; it < 5000; ++it) {
      const Vector nx = phi_map(p, x);
      const double d = distance_inf(nx, x);
      x = nx;
      if (d <= 1e-14) break;
    }
    const auto sols = brute_force_solutions(p);
    REQUIRE(sols.size() == 1);
    CHECK(distance_inf(x, sols[0]) <= 1e-8);
  }
}

TEST_CASE("psi map") {
  const PwlsProblem d = diag_problem({2, 4}, {1, -2});
  const Splitting sd = split_dlu(d.matrix());
  CHECK(psi_map(d, sd, Vector{3, -1}) == Vector{(1 - 3) / 2.0, -2 / 4.0});

  Rng rng(57);
  const PwlsProblem p = gen_dense_sdd({.n = 6, .seed = 8});
  const Splitting s = split_dlu(p.matrix());
  const double beta = sassenfeld(p.matrix()).beta;
  const auto sols = brute_force_solutions(p);
  REQUIRE(sols.size() == 1);
  CHECK(distance_inf(psi_map(p, s, sols[0]), sols[0]) <= 1e-12);
  for (int k = 0; k < 500; ++k) {
    const Vector x = random_vector(rng, 6, -3, 3), y = random_vector(rng, 6, -3, 3);
    CHECK(distance_inf(psi_map(p, s, x), psi_map(p, s, y)) <= (beta + 1e-10) * distance_inf(x, y));
  }
}

TEST_CASE("check_cycle") {
  const CanonicalInstance c = canonical("spd_3cycle");
  CHECK(check_cycle(c.witness, c.problem));
  CHECK(cycle_residual(c.witness, c.problem) <= 1e-12);
  CHECK_FALSE(check_cycle({c.witness[0], c.witness[2], c.witness[1]}, c.problem));

  const CanonicalInstance d = canonical("diagdom_nosolution");
  CHECK(check_cycle({d.witness[0], d.witness[1]}, d.problem));
  CHECK(check_cycle({d.witness[2], d.witness[3]}, d.problem));

  const auto sol = brute_force_solutions(c.problem)[0];
  CHECK(check_cycle({sol, sol, sol}, c.problem));
  CHECK_THROWS(check_cycle({sol}, c.problem));
}
