#include "doctest.h"
#include "helpers.hpp"
#include "pwls/errors.hpp"
#include "pwls/linalg.hpp"

using namespace pwls;
using namespace pwls::test;

TEST_CASE("matvec on each storage") {
  CHECK(matvec(DenseMatrix::identity(2), Vector{3, -1}) == Vector{3, -1});
  CHECK(matvec(DenseMatrix::from_rows({{2, 0.5}, {0.5, 2}}), Vector{1, 1}) == Vector{2.5, 2.5});
  const SparseMatrix d = SparseMatrix::from_triplets(3, 3, {{0, 0, 1}, {1, 1, 2}, {2, 2, 3}});
  CHECK(matvec(d, Vector{1, 1, 1}) == Vector{1, 2, 3});
  CHECK_THROWS_AS(matvec(d, Vector{1, 1}), DimensionMismatch);
}

TEST_CASE("matrix invariants are enforced") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1, 2, 3}), DimensionMismatch);
  CHECK_THROWS_AS(DenseMatrix(1, 1, {std::nan("")}), InvalidArgument);
  // Columns must increase within a row.
  CHECK_THROWS(SparseMatrix(2, 2, {0, 2, 2}, {1, 0}, {1.0, 2.0}));
  CHECK_THROWS(SparseMatrix(2, 2, {0, 1, 2}, {0, 5}, {1.0, 2.0}));
  CHECK_THROWS(PentaBandMatrix::symmetric(2, Vector(4, 1.0), Vector(2, 0.0), Vector(2, 0.0)));
}

TEST_CASE("from_triplets sums duplicates") {
  const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{1, 0, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}});
  const DenseMatrix d = to_dense(a);
  CHECK(d(1, 0) == 4.0);
  CHECK(d(0, 1) == 2.0);
  CHECK(a.nnz() == 2);
}

TEST_CASE("lu_solve examples") {
  for (StorageKind kind : {StorageKind::Dense, StorageKind::Sparse}) {
    auto as = [&](DenseMatrix d) -> Matrix {
      if (kind == StorageKind::Dense) return d;
      return SparseMatrix::from_dense(d);
    };
    CHECK(lu_solve(as(DenseMatrix::identity(2)), Vector{5, -2}) == Vector{5, -2});
    check_close(lu_solve(as(DenseMatrix::from_rows({{2, 1}, {1, 2}})), Vector{3, 3}), Vector{1, 1}, 1e-15);
    check_close(lu_solve(as(DenseMatrix::from_rows({{0, 1}, {1, 0}})), Vector{1, 2}), Vector{2, 1}, 0.0);
    CHECK_THROWS_AS(lu_solve(as(DenseMatrix::from_rows({{1, 2}, {2, 4}})), Vector{1, 1}), SingularMatrix);
  }
}

TEST_CASE("lu_solve residual on random nonsingular systems") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.next() % 50;
    const DenseMatrix a = random_dense(rng, n, n);
    const Vector b = random_vector(rng, n);
    const double bound = 1e-8 * (1 + norm_inf(b));
    const SparseMatrix s = SparseMatrix::from_dense(a);
    for (const Matrix& m : {Matrix(a), Matrix(s)})
      for (bool amd : {false, true}) {
        const Vector x = lu_solve(m, b, {1e-14, amd});
        CHECK(norm_inf(sub(matvec(m, x), b)) <= bound);
      }
  }
}

TEST_CASE("sparse lu on a structurally sparse system with ordering") {
  Rng rng(5);
  const std::size_t n = 400;
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, 4.0 + rng.uniform01()});
    for (int k = 0; k < 3; ++k) t.push_back({i, rng.next() % n, rng.uniform(-1, 1)});
  }
  const SparseMatrix a = SparseMatrix::from_triplets(n, n, t);
  const Vector b = random_vector(rng, n);
  const Vector x = lu_solve(a, b, {1e-14, true});
  CHECK(norm_inf(sub(matvec(a, x), b)) <= 1e-10);
  check_close(x, lu_solve(to_dense(a), b), 1e-10);
}

TEST_CASE("penta band matvec and solve match dense") {
  Rng rng(3);
  for (std::size_t m = 1; m <= 8; ++m)
    for (bool sym : {true, false}) {
      const PentaBandMatrix p = random_penta(rng, m, sym);
      const DenseMatrix d = to_dense(p);
      const Vector x = random_vector(rng, m * m);
      check_close(matvec(p, x), matvec(d, x), 1e-14);
      const Vector y = lu_solve(p, x);
      check_close(y, lu_solve(d, x), 1e-12);
    }
}

TEST_CASE("penta lu reports a vanishing pivot") {
  const PentaBandMatrix p = PentaBandMatrix::symmetric(2, {1, 1, 0, 1}, {1, 0, 0}, {0, 0});
  CHECK_THROWS_AS(lu_solve(p, Vector{1, 1, 1, 1}), SingularMatrix);
}

TEST_CASE("forward substitution examples") {
  auto solve_lower = [](const DenseMatrix& l, Vector b) {
    const Matrix strict = strictly_lower(l);
    const Vector d = diagonal(l);
    return forward_substitution({strict, d}, b);
  };
  CHECK(solve_lower(DenseMatrix::from_rows({{2, 0}, {0.5, 2}}), {1, 1}) == Vector{0.5, 0.375});
  CHECK(solve_lower(DenseMatrix::identity(3), {4, -1, 2}) == Vector{4, -1, 2});
  CHECK(solve_lower(DenseMatrix::from_rows({{1, 0}, {1, 1}}), {1, 2}) == Vector{1, 1});
  try {
    solve_lower(DenseMatrix::from_rows({{1, 0}, {1, 0}}), {1, 2});
    FAIL("expected ZeroDiagonal");
  } catch (const ZeroDiagonal& e) {
    CHECK(e.row() == 1);
  }
}

TEST_CASE("forward substitution agrees with lu on lower-triangular input") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.next() % 30;
    DenseMatrix l = random_dense(rng, n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) l(i, j) = 0.0;
      l(i, i) = 2.0 + rng.uniform01();
    }
    const Vector b = random_vector(rng, n);
    const Matrix strict = strictly_lower(SparseMatrix::from_dense(l));
    const Vector d = diagonal(l);
    check_close(forward_substitution({strict, d}, b), lu_solve(l, b), 1e-12);
  }
}

TEST_CASE("diagonal solve examples") {
  CHECK(diagonal_solve(Vector{2, 2}, Vector{1, 1}) == Vector{0.5, 0.5});
  CHECK(diagonal_solve(Vector{1, 1, 1}, Vector{3, -4, 5}) == Vector{3, -4, 5});
  CHECK(diagonal_solve(Vector{-2}, Vector{3}) == Vector{-1.5});
  CHECK_THROWS_AS(diagonal_solve(Vector{1, 0}, Vector{1, 1}), ZeroDiagonal);
}

TEST_CASE("storage helpers preserve the storage kind") {
  Rng rng(2);
  const PentaBandMatrix p = random_penta(rng, 3, true);
  const DenseMatrix d = to_dense(p);
  const Vector shift = random_vector(rng, 9);
  for (const Matrix& m : {Matrix(d), Matrix(SparseMatrix::from_dense(d)), Matrix(p)}) {
    const Matrix s = add_to_diagonal(m, shift);
    CHECK(storage_kind(s) == storage_kind(m));
    DenseMatrix expect = d;
    for (std::size_t i = 0; i < 9; ++i) expect(i, i) += shift[i];
    CHECK(to_dense(s) == expect);
    const DenseMatrix lo = to_dense(strictly_lower(m)), up = to_dense(strictly_upper(m));
    for (std::size_t i = 0; i < 9; ++i)
      for (std::size_t j = 0; j < 9; ++j) {
        CHECK(lo(i, j) == (j < i ? d(i, j) : 0.0));
        CHECK(up(i, j) == (j > i ? d(i, j) : 0.0));
      }
  }
}

TEST_CASE("add_to_diagonal inserts missing sparse diagonal entries") {
  const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}});
  const Matrix s = add_to_diagonal(a, Vector{2, 3});
  CHECK(to_dense(s) == DenseMatrix::from_rows({{2, 1}, {0, 3}}));
}

TEST_CASE("norms") {
  CHECK(norm2(Vector{3, 4}) == doctest::Approx(5.0));
  CHECK(norm2(Vector{1e300, 1e300}) == doctest::Approx(std::sqrt(2.0) * 1e300));
  CHECK(norm_inf(Vector{1, -7, 3}) == 7.0);
  CHECK(distance_inf(Vector{1, 2}, Vector{0, 5}) == 3.0);
}
