#pragma once

// Dense, compressed sparse row and pentadiagonal band storage, plus the
// direct solve kernels used by the Newton-type iterations.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "pwls/errors.hpp"

namespace pwls {

using Vector = std::vector<double>;

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

  template <class F>
  void for_each_in_row(std::size_t i, F&& f) const {
    const double* r = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j)
      if (r[j] != 0.0) f(j, r[j]);
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row storage. Column indices are strictly increasing
/// within each row; explicit zeros are allowed.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  /// Duplicates are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix from_dense(const DenseMatrix& a);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
  const std::vector<std::size_t>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  template <class F>
  void for_each_in_row(std::size_t i, F&& f) const {
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) f(col_indices_[p], values_[p]);
  }

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// Five-point stencil matrix of order m*m on an m-by-m grid in row-major
/// node order: couplings k<->k+1 and k<->k+m. A symmetric matrix keeps only
/// the upper bands.
class PentaBandMatrix {
 public:
  PentaBandMatrix() = default;
  static PentaBandMatrix symmetric(std::size_t grid_side, Vector diag, Vector off1, Vector offm);
  static PentaBandMatrix general(std::size_t grid_side, Vector diag, Vector lower1, Vector upper1,
                                 Vector lowerm, Vector upperm);

  std::size_t grid_side() const { return m_; }
  std::size_t order() const { return diag_.size(); }
  std::size_t rows() const { return order(); }
  std::size_t cols() const { return order(); }
  bool is_symmetric() const { return symmetric_; }

  const Vector& diag() const { return diag_; }
  /// Entry (k, k+1) for k < n-1.
  const Vector& upper1() const { return upper1_; }
  /// Entry (k+1, k) for k < n-1.
  const Vector& lower1() const { return symmetric_ ? upper1_ : lower1_; }
  /// Entry (k, k+m) for k < n-m.
  const Vector& upperm() const { return upperm_; }
  /// Entry (k+m, k) for k < n-m.
  const Vector& lowerm() const { return symmetric_ ? upperm_ : lowerm_; }

  template <class F>
  void for_each_in_row(std::size_t i, F&& f) const {
    const std::size_t n = order();
    const Vector& l1 = lower1();
    const Vector& lm = lowerm();
    if (i >= m_ && lm[i - m_] != 0.0) f(i - m_, lm[i - m_]);
    if (i >= 1 && l1[i - 1] != 0.0) f(i - 1, l1[i - 1]);
    if (diag_[i] != 0.0) f(i, diag_[i]);
    if (i + 1 < n && upper1_[i] != 0.0) f(i + 1, upper1_[i]);
    if (i + m_ < n && upperm_[i] != 0.0) f(i + m_, upperm_[i]);
  }

  friend bool operator==(const PentaBandMatrix&, const PentaBandMatrix&) = default;

 private:
  std::size_t m_ = 0;
  bool symmetric_ = true;
  Vector diag_, upper1_, lower1_, upperm_, lowerm_;
};

using Matrix = std::variant<DenseMatrix, SparseMatrix, PentaBandMatrix>;

enum class StorageKind { Dense, Sparse, Penta };

StorageKind storage_kind(const Matrix& a);
std::string_view storage_name(StorageKind kind);
StorageKind parse_storage(std::string_view name);

std::size_t rows(const Matrix& a);
std::size_t cols(const Matrix& a);

/// Visits the stored entries of row i as f(col, value).
template <class F>
void for_each_in_row(const Matrix& a, std::size_t i, F&& f) {
  std::visit([&](const auto& m) { m.for_each_in_row(i, f); }, a);
}

Vector matvec(const Matrix& a, std::span<const double> x);
Vector diagonal(const Matrix& a);
double max_abs(const Matrix& a);
bool is_finite(const Matrix& a);
DenseMatrix to_dense(const Matrix& a);

/// a + diag(shift), preserving the storage kind.
Matrix add_to_diagonal(const Matrix& a, std::span<const double> shift);
Matrix strictly_lower(const Matrix& a);
Matrix strictly_upper(const Matrix& a);

struct LuOptions {
  /// A pivot is rejected when |pivot| < drop_tolerance * max|A|.
  double drop_tolerance = 1e-14;
  /// Approximate minimum degree pre-ordering for sparse factorizations.
  bool fill_reducing_ordering = false;
};

Vector lu_solve(const DenseMatrix& a, std::span<const double> b, const LuOptions& opts = {});
Vector lu_solve(const SparseMatrix& a, std::span<const double> b, const LuOptions& opts = {});
/// Banded elimination without pivoting inside the m-wide profile.
Vector lu_solve(const PentaBandMatrix& a, std::span<const double> b, const LuOptions& opts = {});
Vector lu_solve(const Matrix& a, std::span<const double> b, const LuOptions& opts = {});

/// Lower-triangular operator made of the strictly lower part of a matrix
/// and an explicit diagonal.
struct LowerTriangularView {
  const Matrix& strict_lower;
  std::span<const double> diagonal;
};

Vector forward_substitution(const LowerTriangularView& lower, std::span<const double> b);
Vector diagonal_solve(std::span<const double> d, std::span<const double> b);

double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
/// max_i |x_i - y_i|
double distance_inf(std::span<const double> x, std::span<const double> y);

}  // namespace pwls
