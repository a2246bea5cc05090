#include "pwls/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pwls {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

void require_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                            std::to_string(got));
}

}  // namespace

// ---------------------------------------------------------------- DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  require_len(data_.size(), rows * cols, "DenseMatrix");
  require_finite(data_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    require_len(row.size(), c, "DenseMatrix::from_rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(data));
}

// --------------------------------------------------------------- SparseMatrix

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  require_len(row_offsets_.size(), rows_ + 1, "SparseMatrix row_offsets");
  if (row_offsets_.front() != 0) throw InvalidArgument("SparseMatrix: row_offsets must start at 0");
  require_len(col_indices_.size(), row_offsets_.back(), "SparseMatrix col_indices");
  require_len(values_.size(), col_indices_.size(), "SparseMatrix values");
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i]) throw InvalidArgument("SparseMatrix: row_offsets decrease");
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      if (col_indices_[p] >= cols_) throw InvalidArgument("SparseMatrix: column index out of range");
      if (p > row_offsets_[i] && col_indices_[p] <= col_indices_[p - 1])
        throw InvalidArgument("SparseMatrix: column indices not strictly increasing in row " + std::to_string(i));
    }
  }
  require_finite(values_, "SparseMatrix");
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  for (const auto& t : entries)
    if (t.row >= rows || t.col >= cols) throw InvalidArgument("SparseMatrix::from_triplets: index out of range");
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  std::vector<std::size_t> offsets(rows + 1, 0);
  std::vector<std::size_t> cols_out;
  std::vector<double> vals;
  cols_out.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t p = 0; p < entries.size(); ++p) {
    const auto& t = entries[p];
    if (p > 0 && entries[p - 1].row == t.row && entries[p - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols_out.push_back(t.col);
    vals.push_back(t.value);
    ++offsets[t.row + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return SparseMatrix(rows, cols, std::move(offsets), std::move(cols_out), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1), idx(n);
  std::iota(offsets.begin(), offsets.end(), std::size_t{0});
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return SparseMatrix(n, n, std::move(offsets), std::move(idx), Vector(n, 1.0));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& a) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < a.rows(); ++i)
    a.for_each_in_row(i, [&](std::size_t j, double v) { t.push_back({i, j, v}); });
  return from_triplets(a.rows(), a.cols(), std::move(t));
}

// ------------------------------------------------------------ PentaBandMatrix

PentaBandMatrix PentaBandMatrix::symmetric(std::size_t grid_side, Vector diag, Vector off1, Vector offm) {
  return general(grid_side, std::move(diag), {}, std::move(off1), {}, std::move(offm));
}

PentaBandMatrix PentaBandMatrix::general(std::size_t grid_side, Vector diag, Vector lower1, Vector upper1,
                                         Vector lowerm, Vector upperm) {
  if (grid_side == 0) throw InvalidArgument("PentaBandMatrix: grid side must be positive");
  const std::size_t n = grid_side * grid_side;
  PentaBandMatrix a;
  a.m_ = grid_side;
  a.symmetric_ = lower1.empty() && lowerm.empty();
  require_len(diag.size(), n, "PentaBandMatrix diag");
  require_len(upper1.size(), n - 1, "PentaBandMatrix off1");
  require_len(upperm.size(), n - grid_side, "PentaBandMatrix offm");
  if (!a.symmetric_) {
    require_len(lower1.size(), n - 1, "PentaBandMatrix lower1");
    require_len(lowerm.size(), n - grid_side, "PentaBandMatrix lowerm");
  }
  for (const Vector* v : {&diag, &lower1, &upper1, &lowerm, &upperm}) require_finite(*v, "PentaBandMatrix");
  a.diag_ = std::move(diag);
  a.upper1_ = std::move(upper1);
  a.upperm_ = std::move(upperm);
  a.lower1_ = std::move(lower1);
  a.lowerm_ = std::move(lowerm);
  return a;
}

// ------------------------------------------------------------ Matrix helpers

StorageKind storage_kind(const Matrix& a) { return static_cast<StorageKind>(a.index()); }

std::string_view storage_name(StorageKind kind) {
  switch (kind) {
    case StorageKind::Dense: return "dense";
    case StorageKind::Sparse: return "sparse";
    case StorageKind::Penta: return "penta";
  }
  return "dense";
}

StorageKind parse_storage(std::string_view name) {
  if (name == "dense") return StorageKind::Dense;
  if (name == "sparse") return StorageKind::Sparse;
  if (name == "penta") return StorageKind::Penta;
  throw InvalidArgument("unknown storage kind '" + std::string(name) + "'");
}

std::size_t rows(const Matrix& a) {
  return std::visit([](const auto& m) { return m.rows(); }, a);
}

std::size_t cols(const Matrix& a) {
  return std::visit([](const auto& m) { return m.cols(); }, a);
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  require_len(x.size(), cols(a), "matvec");
  return std::visit(
      [&](const auto& m) {
        Vector y(m.rows(), 0.0);
        for (std::size_t i = 0; i < m.rows(); ++i) {
          double s = 0.0;
          m.for_each_in_row(i, [&](std::size_t j, double v) { s += v * x[j]; });
          y[i] = s;
        }
        return y;
      },
      a);
}

Vector diagonal(const Matrix& a) {
  const std::size_t n = std::min(rows(a), cols(a));
  Vector d(n, 0.0);
  if (const auto* p = std::get_if<PentaBandMatrix>(&a)) return p->diag();
  if (const auto* s = std::get_if<SparseMatrix>(&a)) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ci = s->col_indices();
      auto first = ci.begin() + static_cast<std::ptrdiff_t>(s->row_offsets()[i]);
      auto last = ci.begin() + static_cast<std::ptrdiff_t>(s->row_offsets()[i + 1]);
      auto it = std::lower_bound(first, last, i);
      if (it != last && *it == i) d[i] = s->values()[static_cast<std::size_t>(it - ci.begin())];
    }
    return d;
  }
  const auto& m = std::get<DenseMatrix>(a);
  for (std::size_t i = 0; i < n; ++i) d[i] = m(i, i);
  return d;
}

double max_abs(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < rows(a); ++i)
    for_each_in_row(a, i, [&](std::size_t, double v) { best = std::max(best, std::abs(v)); });
  return best;
}

bool is_finite(const Matrix& a) {
  bool ok = true;
  for (std::size_t i = 0; i < rows(a) && ok; ++i)
    for_each_in_row(a, i, [&](std::size_t, double v) { ok = ok && std::isfinite(v); });
  return ok;
}

DenseMatrix to_dense(const Matrix& a) {
  DenseMatrix d(rows(a), cols(a));
  for (std::size_t i = 0; i < d.rows(); ++i) for_each_in_row(a, i, [&](std::size_t j, double v) { d(i, j) = v; });
  return d;
}

Matrix add_to_diagonal(const Matrix& a, std::span<const double> shift) {
  require_len(shift.size(), rows(a), "add_to_diagonal");
  if (rows(a) != cols(a)) throw DimensionMismatch("add_to_diagonal: matrix not square");
  if (const auto* d = std::get_if<DenseMatrix>(&a)) {
    DenseMatrix out = *d;
    for (std::size_t i = 0; i < shift.size(); ++i) out(i, i) += shift[i];
    return out;
  }
  if (const auto* p = std::get_if<PentaBandMatrix>(&a)) {
    Vector dg = p->diag();
    for (std::size_t i = 0; i < shift.size(); ++i) dg[i] += shift[i];
    if (p->is_symmetric()) return PentaBandMatrix::symmetric(p->grid_side(), std::move(dg), p->upper1(), p->upperm());
    return PentaBandMatrix::general(p->grid_side(), std::move(dg), p->lower1(), p->upper1(), p->lowerm(),
                                    p->upperm());
  }
  const auto& s = std::get<SparseMatrix>(a);
  // Fast path when every diagonal entry is already stored.
  Vector vals = s.values();
  bool all_present = true;
  for (std::size_t i = 0; i < s.rows() && all_present; ++i) {
    bool found = false;
    for (std::size_t p = s.row_offsets()[i]; p < s.row_offsets()[i + 1]; ++p)
      if (s.col_indices()[p] == i) {
        vals[p] += shift[i];
        found = true;
        break;
      }
    all_present = found || shift[i] == 0.0;
  }
  if (all_present) return SparseMatrix(s.rows(), s.cols(), s.row_offsets(), s.col_indices(), std::move(vals));
  std::vector<Triplet> t;
  t.reserve(s.nnz() + s.rows());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    s.for_each_in_row(i, [&](std::size_t j, double v) { t.push_back({i, j, v}); });
    t.push_back({i, i, shift[i]});
  }
  return SparseMatrix::from_triplets(s.rows(), s.cols(), std::move(t));
}

namespace {

template <class Keep>
Matrix triangular_part(const Matrix& a, Keep keep) {
  if (const auto* d = std::get_if<DenseMatrix>(&a)) {
    DenseMatrix out(d->rows(), d->cols());
    for (std::size_t i = 0; i < d->rows(); ++i)
      for (std::size_t j = 0; j < d->cols(); ++j)
        if (keep(i, j)) out(i, j) = (*d)(i, j);
    return out;
  }
  if (const auto* s = std::get_if<SparseMatrix>(&a)) {
    std::vector<std::size_t> offsets(s->rows() + 1, 0), idx;
    Vector vals;
    for (std::size_t i = 0; i < s->rows(); ++i) {
      s->for_each_in_row(i, [&](std::size_t j, double v) {
        if (keep(i, j)) {
          idx.push_back(j);
          vals.push_back(v);
        }
      });
      offsets[i + 1] = idx.size();
    }
    return SparseMatrix(s->rows(), s->cols(), std::move(offsets), std::move(idx), std::move(vals));
  }
  const auto& p = std::get<PentaBandMatrix>(a);
  const std::size_t n = p.order();
  const std::size_t m = p.grid_side();
  const bool lower = keep(1, 0);
  Vector zero1(n - 1, 0.0), zerom(n - m, 0.0);
  if (lower) return PentaBandMatrix::general(m, Vector(n, 0.0), p.lower1(), zero1, p.lowerm(), zerom);
  return PentaBandMatrix::general(m, Vector(n, 0.0), zero1, p.upper1(), zerom, p.upperm());
}

}  // namespace

Matrix strictly_lower(const Matrix& a) {
  return triangular_part(a, [](std::size_t i, std::size_t j) { return j < i; });
}

Matrix strictly_upper(const Matrix& a) {
  return triangular_part(a, [](std::size_t i, std::size_t j) { return j > i; });
}

// ------------------------------------------------------------------- solves

Vector lu_solve(const DenseMatrix& a, std::span<const double> b, const LuOptions& opts) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("lu_solve: matrix not square");
  require_len(b.size(), n, "lu_solve");
  double amax = 0.0;
  for (double v : a.data()) amax = std::max(amax, std::abs(v));
  const double drop = opts.drop_tolerance * amax;
  std::vector<double> lu = a.data();
  Vector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu[i * n + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0 || best < drop) throw SingularMatrix(k);
    if (piv != k) {
      std::swap_ranges(lu.begin() + static_cast<std::ptrdiff_t>(k * n),
                       lu.begin() + static_cast<std::ptrdiff_t>((k + 1) * n),
                       lu.begin() + static_cast<std::ptrdiff_t>(piv * n));
      std::swap(x[k], x[piv]);
    }
    const double* rk = &lu[k * n];
    for (std::size_t i = k + 1; i < n; ++i) {
      double* ri = &lu[i * n];
      const double l = ri[k] / rk[k];
      if (l == 0.0) continue;
      ri[k] = l;
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
      x[i] -= l * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    const double* rk = &lu[k * n];
    for (std::size_t j = k + 1; j < n; ++j) s -= rk[j] * x[j];
    x[k] = s / rk[k];
  }
  return x;
}

Vector lu_solve(const PentaBandMatrix& a, std::span<const double> b, const LuOptions& opts) {
  const std::size_t n = a.order();
  const std::size_t m = a.grid_side();
  require_len(b.size(), n, "lu_solve");
  double amax = 0.0;
  for (std::size_t i = 0; i < n; ++i) a.for_each_in_row(i, [&](std::size_t, double v) { amax = std::max(amax, std::abs(v)); });
  const double drop = opts.drop_tolerance * amax;
  // Band storage, row i holds columns i-m .. i+m.
  const std::size_t w = 2 * m + 1;
  std::vector<double> band(n * w, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return band[i * w + (j + m - i)]; };
  for (std::size_t i = 0; i < n; ++i) a.for_each_in_row(i, [&](std::size_t j, double v) { at(i, j) = v; });
  Vector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) {
    const double pivot = at(k, k);
    if (pivot == 0.0 || std::abs(pivot) < drop) throw SingularMatrix(k);
    const std::size_t last = std::min(n - 1, k + m);
    for (std::size_t i = k + 1; i <= last; ++i) {
      double& lik = at(i, k);
      if (lik == 0.0) continue;
      const double l = lik / pivot;
      lik = l;
      for (std::size_t j = k + 1; j <= last; ++j) at(i, j) -= l * at(k, j);
      x[i] -= l * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    const std::size_t last = std::min(n - 1, k + m);
    for (std::size_t j = k + 1; j <= last; ++j) s -= at(k, j) * x[j];
    x[k] = s / at(k, k);
  }
  return x;
}

Vector lu_solve(const Matrix& a, std::span<const double> b, const LuOptions& opts) {
  return std::visit([&](const auto& m) { return lu_solve(m, b, opts); }, a);
}

Vector forward_substitution(const LowerTriangularView& lower, std::span<const double> b) {
  const std::size_t n = rows(lower.strict_lower);
  require_len(lower.diagonal.size(), n, "forward_substitution diagonal");
  require_len(b.size(), n, "forward_substitution");
  Vector x(n, 0.0);
  std::visit(
      [&](const auto& m) {
        for (std::size_t i = 0; i < n; ++i) {
          if (lower.diagonal[i] == 0.0) throw ZeroDiagonal(i);
          double s = b[i];
          m.for_each_in_row(i, [&](std::size_t j, double v) {
            if (j < i) s -= v * x[j];
          });
          x[i] = s / lower.diagonal[i];
        }
      },
      lower.strict_lower);
  return x;
}

Vector diagonal_solve(std::span<const double> d, std::span<const double> b) {
  require_len(b.size(), d.size(), "diagonal_solve");
  Vector x(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) throw ZeroDiagonal(i);
    x[i] = b[i] / d[i];
  }
  return x;
}

double norm2(std::span<const double> x) {
  // Scaled accumulation guards against overflow on large residuals.
  double scale = 0.0, ssq = 1.0;
  for (double v : x) {
    if (v == 0.0) continue;
    const double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double distance_inf(std::span<const double> x, std::span<const double> y) {
  require_len(y.size(), x.size(), "distance_inf");
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

}  // namespace pwls
