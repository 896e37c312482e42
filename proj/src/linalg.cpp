#include "opalg/linalg.hpp"

#include <string>
#include <utility>

namespace opalg {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                         std::to_string(rows * cols));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<Scalar> Matrix::column(std::size_t c) const {
  std::vector<Scalar> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (sgn(b(k, j)) != 0) out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix sum shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix difference shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

Matrix operator*(const Scalar& s, Matrix m) {
  for (auto& x : m.data_) x *= s;
  return m;
}

std::vector<Scalar> operator*(const Matrix& m, const std::vector<Scalar>& v) {
  if (m.cols() != v.size()) throw DimensionError("matrix-vector shape mismatch");
  std::vector<Scalar> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (sgn(v[c]) != 0) out[r] += m(r, c) * v[c];
  return out;
}

RowEchelon row_reduce(Matrix m) {
  RowEchelon result;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && sgn(m(pivot, col)) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(row, c));
    }
    const Scalar inv = 1 / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || sgn(m(r, col)) == 0) continue;
      const Scalar factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) {
        if (sgn(m(row, c)) != 0) m(r, c) -= factor * m(row, c);
      }
    }
    result.pivots.push_back(col);
    ++row;
  }
  result.reduced = std::move(m);
  return result;
}

std::size_t rank(const Matrix& m) { return row_reduce(m).pivots.size(); }

std::vector<std::vector<Scalar>> null_space(const Matrix& m) {
  auto sol = solve(m, std::vector<Scalar>(m.rows()));
  return std::move(sol->directions);
}

std::optional<LinearSolution> solve(const Matrix& m, const std::vector<Scalar>& rhs) {
  if (rhs.size() != m.rows()) throw DimensionError("right-hand side length mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = rhs[r];
  }
  RowEchelon ech = row_reduce(std::move(aug));
  if (!ech.pivots.empty() && ech.pivots.back() == m.cols()) return std::nullopt;

  const Matrix& red = ech.reduced;
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : ech.pivots) is_pivot[p] = true;

  LinearSolution sol;
  sol.particular.assign(m.cols(), Scalar(0));
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) sol.particular[ech.pivots[r]] = red(r, m.cols());
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> dir(m.cols());
    dir[f] = 1;
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) dir[ech.pivots[r]] = -red(r, f);
    sol.directions.push_back(std::move(dir));
    sol.free_columns.push_back(f);
  }
  return sol;
}

Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = 1;
  }
  RowEchelon ech = row_reduce(std::move(aug));
  if (ech.pivots.size() < n || ech.pivots[n - 1] != n - 1) throw Error("matrix is singular");
  Matrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = ech.reduced(r, n + c);
  return inv;
}

}  // namespace opalg
