#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "opalg/scalar.hpp"

namespace opalg {

/// Dense row-major matrix over Q.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> row_major);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const std::vector<Scalar>& data() const { return data_; }

  std::vector<Scalar> column(std::size_t c) const;
  Matrix transposed() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Scalar& s, Matrix m);
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

std::vector<Scalar> operator*(const Matrix& m, const std::vector<Scalar>& v);

/// Reduced row echelon form. `pivots[r]` is the pivot column of row r for the
/// first `pivots.size()` (= rank) rows; remaining rows are zero.
struct RowEchelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

RowEchelon row_reduce(Matrix m);
std::size_t rank(const Matrix& m);

/// Basis of {x : m x = 0}, one vector per free column, with that free
/// coordinate equal to 1 and the other free coordinates 0.
std::vector<std::vector<Scalar>> null_space(const Matrix& m);

/// Solution set of m x = rhs: particular solution with all free coordinates
/// zero, plus the null-space basis, plus the free column indices (so the
/// affine parameters coincide with the free coordinates).
struct LinearSolution {
  std::vector<Scalar> particular;
  std::vector<std::vector<Scalar>> directions;
  std::vector<std::size_t> free_columns;
};

std::optional<LinearSolution> solve(const Matrix& m, const std::vector<Scalar>& rhs);

/// Throws Error when singular.
Matrix inverse(const Matrix& m);

}  // namespace opalg
