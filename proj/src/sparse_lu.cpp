// Left-looking sparse LU with threshold partial pivoting (Gilbert-Peierls),
// optionally preceded by an approximate minimum degree symmetric ordering.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

extern "C" {
#include <amd.h>
}

#include "pwls/linalg.hpp"

namespace pwls {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

// Column-compressed copy of a CSR matrix.
struct Csc {
  std::size_t n = 0;
  std::vector<std::size_t> colptr;
  std::vector<std::size_t> rowind;
  std::vector<double> values;
};

Csc to_csc(const SparseMatrix& a) {
  Csc c;
  c.n = a.cols();
  c.colptr.assign(c.n + 1, 0);
  for (std::size_t j : a.col_indices()) ++c.colptr[j + 1];
  std::partial_sum(c.colptr.begin(), c.colptr.end(), c.colptr.begin());
  c.rowind.resize(a.nnz());
  c.values.resize(a.nnz());
  std::vector<std::size_t> next(c.colptr.begin(), c.colptr.end() - 1);
  for (std::size_t i = 0; i < a.rows(); ++i)
    a.for_each_in_row(i, [&](std::size_t j, double v) {
      const std::size_t p = next[j]++;
      c.rowind[p] = i;
      c.values[p] = v;
    });
  return c;
}

std::vector<std::size_t> amd_ordering(const SparseMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<int> ap(a.row_offsets().begin(), a.row_offsets().end());
  std::vector<int> ai(a.col_indices().begin(), a.col_indices().end());
  std::vector<int> perm(n);
  double control[AMD_CONTROL];
  double info[AMD_INFO];
  amd_defaults(control);
  const int status = amd_order(static_cast<int>(n), ap.data(), ai.data(), perm.data(), control, info);
  if (status != AMD_OK && status != AMD_OK_BUT_JUMBLED) throw Error("amd_order failed");
  return {perm.begin(), perm.end()};
}

// Factors A(:, q) with row pivoting. L is unit lower triangular with its unit
// diagonal stored first in each column; U keeps its diagonal last.
class SparseLu {
 public:
  SparseLu(const Csc& a, std::vector<std::size_t> q, double drop, double diag_preference)
      : n_(a.n), q_(std::move(q)), pinv_(a.n, kUnset) {
    lp_.reserve(n_ + 1);
    up_.reserve(n_ + 1);
    Vector x(n_, 0.0);
    std::vector<std::size_t> reach;
    std::vector<std::size_t> mark(n_, kUnset);
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    for (std::size_t k = 0; k < n_; ++k) {
      lp_.push_back(li_.size());
      up_.push_back(ui_.size());
      const std::size_t col = q_[k];
      compute_reach(a, col, k, mark, stack, reach);
      // x = L \ A(:, col) restricted to the reach.
      for (std::size_t i : reach) x[i] = 0.0;
      for (std::size_t p = a.colptr[col]; p < a.colptr[col + 1]; ++p) x[a.rowind[p]] = a.values[p];
      for (std::size_t i : reach) {
        const std::size_t jj = pinv_[i];
        if (jj == kUnset) continue;
        const double xi = x[i];
        for (std::size_t p = lp_[jj] + 1; p < lp_[jj + 1]; ++p) x[li_[p]] -= lx_[p] * xi;
      }
      std::size_t ipiv = kUnset;
      double best = -1.0;
      for (std::size_t i : reach) {
        if (pinv_[i] == kUnset) {
          if (std::abs(x[i]) > best) {
            best = std::abs(x[i]);
            ipiv = i;
          }
        } else {
          ui_.push_back(pinv_[i]);
          ux_.push_back(x[i]);
        }
      }
      if (ipiv == kUnset || best == 0.0 || best < drop) throw SingularMatrix(k);
      if (pinv_[col] == kUnset && std::abs(x[col]) >= diag_preference * best) ipiv = col;
      const double pivot = x[ipiv];
      ui_.push_back(k);
      ux_.push_back(pivot);
      pinv_[ipiv] = k;
      li_.push_back(ipiv);
      lx_.push_back(1.0);
      for (std::size_t i : reach) {
        if (pinv_[i] == kUnset) {
          li_.push_back(i);
          lx_.push_back(x[i] / pivot);
        }
        x[i] = 0.0;
      }
    }
    lp_.push_back(li_.size());
    up_.push_back(ui_.size());
    for (auto& r : li_) r = pinv_[r];
  }

  Vector solve(std::span<const double> b) const {
    Vector y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[pinv_[i]] = b[i];
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t p = lp_[j] + 1; p < lp_[j + 1]; ++p) y[li_[p]] -= lx_[p] * y[j];
    for (std::size_t j = n_; j-- > 0;) {
      y[j] /= ux_[up_[j + 1] - 1];
      for (std::size_t p = up_[j]; p + 1 < up_[j + 1]; ++p) y[ui_[p]] -= ux_[p] * y[j];
    }
    Vector x(n_);
    for (std::size_t k = 0; k < n_; ++k) x[q_[k]] = y[k];
    return x;
  }

 private:
  // Rows reachable from the pattern of A(:, col) through the columns of L
  // built so far, in topological order (Gilbert-Peierls symbolic step).
  void compute_reach(const Csc& a, std::size_t col, std::size_t stamp, std::vector<std::size_t>& mark,
                     std::vector<std::pair<std::size_t, std::size_t>>& stack,
                     std::vector<std::size_t>& reach) const {
    reach.clear();
    for (std::size_t p = a.colptr[col]; p < a.colptr[col + 1]; ++p) {
      const std::size_t root = a.rowind[p];
      if (mark[root] == stamp) continue;
      mark[root] = stamp;
      stack.push_back({root, child_begin(root)});
      while (!stack.empty()) {
        auto& [node, pos] = stack.back();
        const std::size_t end = child_end(node);
        bool pushed = false;
        while (pos < end) {
          const std::size_t child = li_[pos++];
          if (mark[child] != stamp) {
            mark[child] = stamp;
            stack.push_back({child, child_begin(child)});
            pushed = true;
            break;
          }
        }
        if (!pushed) {
          reach.push_back(stack.back().first);
          stack.pop_back();
        }
      }
    }
    std::reverse(reach.begin(), reach.end());
  }

  std::size_t child_begin(std::size_t row) const {
    const std::size_t j = pinv_[row];
    return j == kUnset ? 0 : lp_[j] + 1;
  }
  std::size_t child_end(std::size_t row) const {
    const std::size_t j = pinv_[row];
    return j == kUnset ? 0 : lp_[j + 1];
  }

  std::size_t n_;
  std::vector<std::size_t> q_;
  std::vector<std::size_t> pinv_;
  std::vector<std::size_t> lp_, li_, up_, ui_;
  Vector lx_, ux_;
};

}  // namespace

Vector lu_solve(const SparseMatrix& a, std::span<const double> b, const LuOptions& opts) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("lu_solve: matrix not square");
  if (b.size() != n) throw DimensionMismatch("lu_solve: rhs length mismatch");
  if (n == 0) return {};
  std::vector<std::size_t> q(n);
  if (opts.fill_reducing_ordering)
    q = amd_ordering(a);
  else
    std::iota(q.begin(), q.end(), std::size_t{0});
  double amax = 0.0;
  for (double v : a.values()) amax = std::max(amax, std::abs(v));
  const double drop = opts.drop_tolerance * amax;
  // Diagonal preference keeps the symmetric ordering intact when pivoting allows.
  const SparseLu lu(to_csc(a), std::move(q), drop, opts.fill_reducing_ordering ? 0.1 : 1.0);
  return lu.solve(b);
}

}  // namespace pwls
