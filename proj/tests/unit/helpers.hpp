#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pwls/generators.hpp"
#include "pwls/linalg.hpp"

namespace pwls::test {

inline DenseMatrix random_dense(Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0) {
  DenseMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = rng.uniform(lo, hi);
  return a;
}

inline PentaBandMatrix random_penta(Rng& rng, std::size_t m, bool symmetric) {
  const std::size_t n = m * m;
  Vector d = random_vector(rng, n, 4.0, 6.0);
  Vector l1 = random_vector(rng, n - 1), u1 = random_vector(rng, n - 1);
  Vector lm = random_vector(rng, n - m), um = random_vector(rng, n - m);
  // Grid rows do not couple across their ends.
  for (std::size_t k = m - 1; k + 1 < n; k += m) l1[k] = u1[k] = 0.0;
  if (symmetric) return PentaBandMatrix::symmetric(m, std::move(d), std::move(u1), std::move(um));
  return PentaBandMatrix::general(m, std::move(d), std::move(l1), std::move(u1), std::move(lm), std::move(um));
}

inline void check_close(std::span<const double> a, std::span<const double> b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol);
}

inline Vector sub(std::span<const double> a, std::span<const double> b) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

}  // namespace pwls::test
