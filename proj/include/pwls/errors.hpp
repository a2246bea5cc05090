#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pwls {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A factorization met a pivot below the drop tolerance. `index()` is the
/// elimination step at which it happened.
class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(std::size_t index)
      : Error("singular matrix: pivot below drop tolerance at step " + std::to_string(index)),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class ZeroDiagonal : public Error {
 public:
  explicit ZeroDiagonal(std::size_t row)
      : Error("zero diagonal entry in row " + std::to_string(row)), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Malformed input file. Carries the offending path and 1-based line (0 when
/// the problem is not tied to a line).
class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what)
      : Error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        path_(std::move(path)),
        line_(line) {}
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

}  // namespace pwls
