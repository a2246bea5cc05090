#include "doctest.h"
#include "helpers.hpp"
#include "pwls/analysis.hpp"
#include "pwls/generators.hpp"
#include "pwls/solvers.hpp"

using namespace pwls;
using namespace pwls::test;

TEST_CASE("rng is the standard mt19937_64 stream") {
  // The standard fixes the 10000th output of a default-seeded engine.
  std::mt19937_64 ref;
  ref.discard(9999);
  CHECK(ref() == 9981545732273789042ULL);
  Rng a(5489), b(5489);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
  Rng c(1);
  for (int k = 0; k < 1000; ++k) {
    const double u = c.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("dense sdd generator") {
  const GenSpec spec{.n = 30, .seed = 9};
  const PwlsProblem p = gen_dense_sdd(spec);
  CHECK(p.storage() == StorageKind::Dense);
  CHECK(strong_diagonal_dominance(p.matrix()).holds);
  const DenseMatrix t = to_dense(p.matrix());
  for (std::size_t i = 0; i < 30; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 30; ++j)
      if (j != i) {
        CHECK(std::abs(t(i, j)) <= 1.0);
        s += std::abs(t(i, j));
      }
    CHECK(t(i, i) == doctest::Approx(1.001 + s).epsilon(1e-14));
    CHECK(std::abs(p.rhs()[i]) <= 1.0);
  }
  const PwlsProblem q = gen_dense_sdd(spec);
  CHECK(to_dense(q.matrix()) == t);
  CHECK(q.rhs() == p.rhs());
  CHECK(to_dense(gen_dense_sdd({.n = 30, .seed = 10}).matrix()) != t);
}

TEST_CASE("sparse sdd generator") {
  const GenSpec spec{.n = 2000, .kind = GenKind::SparseSDD, .density = 0.003, .seed = 4};
  const PwlsProblem p = gen_sparse_sdd(spec);
  const auto& s = std::get<SparseMatrix>(p.matrix());
  const double offdiag = static_cast<double>(s.nnz() - 2000);
  const double expected = 0.003 * 2000.0 * 1999.0;
  CHECK(std::abs(offdiag - expected) <= 0.2 * expected);
  CHECK(strong_diagonal_dominance(p.matrix()).holds);
  for (std::size_t i = 0; i < 2000; ++i) CHECK(diagonal(p.matrix())[i] >= 1.001);
  const PwlsProblem q = gen_sparse_sdd(spec);
  CHECK(std::get<SparseMatrix>(q.matrix()) == s);
  CHECK(q.rhs() == p.rhs());
  const PwlsProblem full = gen_sparse_sdd({.n = 5, .kind = GenKind::SparseSDD, .density = 1.0, .seed = 1});
  CHECK(std::get<SparseMatrix>(full.matrix()).nnz() == 25);
}

TEST_CASE("spd generator") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PwlsProblem p = gen_spd({.n = 1 + seed % 8, .kind = GenKind::SPD, .seed = seed});
    CHECK(is_spd(p.matrix()));
    CHECK(brute_force_solutions(p).size() == 1);
  }
}

TEST_CASE("diagonal generator keeps away from 0 and -1") {
  const PwlsProblem p = gen_diagonal({.n = 500, .kind = GenKind::Diagonal, .seed = 2});
  for (double t : diagonal(p.matrix())) {
    CHECK(std::abs(t) >= 0.05);
    CHECK(std::abs(t + 1) >= 0.05);
    CHECK(std::abs(t) <= 3.0);
  }
}

TEST_CASE("generator settings validation and json") {
  CHECK_THROWS_AS(validate(GenSpec{.n = 0}), InvalidArgument);
  CHECK_THROWS_AS(validate(GenSpec{.density = 0.0}), InvalidArgument);
  CHECK_THROWS_AS(validate(GenSpec{.density = 1.5}), InvalidArgument);
  const GenSpec s{.n = 17, .kind = GenKind::SparseSDD, .density = 0.25, .seed = 99, .diag_offset = 1000, .offdiag_scale = 0.5};
  const GenSpec r = gen_spec_from_json(to_json(s));
  CHECK(r.n == s.n);
  CHECK(r.kind == s.kind);
  CHECK(r.density == s.density);
  CHECK(r.seed == s.seed);
  CHECK(r.diag_offset == s.diag_offset);
  CHECK(r.offdiag_scale == s.offdiag_scale);
  CHECK_THROWS_AS(parse_kind("banded"), InvalidArgument);
}

TEST_CASE("nearly diagonal family") {
  const PwlsProblem p = gen_dense_sdd({.n = 50, .seed = 1, .diag_offset = 1000, .offdiag_scale = 0.01});
  const DenseMatrix t = to_dense(p.matrix());
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(t(i, i) >= 1000);
    for (std::size_t j = 0; j < 50; ++j)
      if (i != j) CHECK(std::abs(t(i, j)) <= 0.01);
  }
}

TEST_CASE("canonical instances") {
  const CanonicalInstance c = canonical("spd_3cycle");
  CHECK(to_dense(c.problem.matrix())(0, 1) == -0.26);
  CHECK(c.problem.rhs() == Vector{0.18, -0.48, 0.30});
  CHECK(c.witness.size() == 3);
  CHECK(check_cycle(c.witness, c.problem));
  CHECK(is_spd(c.problem.matrix()));
  const auto sols = brute_force_solutions(c.problem);
  REQUIRE(sols.size() == 1);
  Vector same_orthant = sols[0];
  for (double& v : same_orthant) v *= 3;
  const SolveReport r = solve(c.problem, Method::Newton, same_orthant);
  CHECK(r.converged());
  CHECK(r.iterations == 1);

  const CanonicalInstance d = canonical("diagdom_nosolution");
  CHECK(d.witness.size() == 4);
  CHECK(brute_force_solutions(d.problem).empty());

  CHECK_THROWS_AS(canonical("nope"), UnknownName);
}
