#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/linalg.hpp"
#include "opalg/verdict.hpp"

namespace opalg {

/// Linear map on an algebra's coordinate space. Column j of the matrix holds
/// the coordinates of R(e_j).
class LinearOperator {
 public:
  explicit LinearOperator(Matrix matrix);

  static LinearOperator identity(std::size_t dim) { return LinearOperator(Matrix::identity(dim)); }
  static LinearOperator zero(std::size_t dim) { return LinearOperator(Matrix(dim, dim)); }

  std::size_t dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  /// R(e_j)
  Element image(std::size_t j) const { return Element(matrix_.column(j)); }
  Element operator()(const Element& x) const;

  friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
    return LinearOperator(a.matrix_ + b.matrix_);
  }
  /// Composition: (a * b)(x) = a(b(x)).
  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
    return LinearOperator(a.matrix_ * b.matrix_);
  }
  friend bool operator==(const LinearOperator& a, const LinearOperator& b) = default;

 private:
  Matrix matrix_;
};

/// Errors when the matrix is not square of size a.dim().
LinearOperator make_operator(const Algebra& a, Matrix matrix);

std::string fingerprint(const LinearOperator& r);

class SpanEscapeError : public Error {
 public:
  SpanEscapeError(std::size_t basis_index, Element residual);
  std::size_t basis_index;
  Element residual;
};

/// R(x) = u x on the span, expressed in the embedding's basis. Errors with
/// SpanEscapeError if some u b_j leaves the span.
LinearOperator left_multiplication_operator(const Embedding& emb, const Element& u);

enum class OperatorKind {
  endomorphism,          // R(x)R(y) = R(xy)
  idempotent_op,         // R^2 = R
  involution_op,         // R^2 = id
  scaled_idempotent_op,  // R^2 = a R
  scaled_involution_op,  // R^2 = a id
  derivation,            // R(xy) = R(x)y + xR(y)
  left_averaging,        // R(x)R(y) = R(R(x)y)
  rota_baxter,           // R(x)R(y) = R(R(x)y + xR(y) + l xy)
  rota_baxter_mirrored,  // R(x)R(y) = R(R(x)y + yR(x) + l xy)
  rota_baxter_weighted,  // R(x)R(y) = R(R(x)y + xR(y) + l xy) + b xy
};

struct OperatorProperty {
  OperatorKind kind = OperatorKind::endomorphism;
  std::vector<Scalar> params;
};

/// Number of Scalar parameters the kind takes.
std::size_t parameter_count(OperatorKind kind);
std::string_view to_string(OperatorKind kind);
OperatorKind parse_operator_kind(std::string_view name);
const std::vector<OperatorKind>& all_operator_kinds();

/// "rota_baxter(1/2)", "endomorphism", "rota_baxter_weighted(1,-2)".
OperatorProperty parse_operator_property(std::string_view text);
std::string to_string(const OperatorProperty& p);

/// Exact check over all basis pairs (each identity is bilinear in (x, y), or
/// linear in x for the R^2 conditions). Witness is the first failing pair
/// (or single index). Errors on malformed parameters or dimension mismatch.
Verdict check_operator_property(const Algebra& a, const LinearOperator& r, const OperatorProperty& p);

/// Evaluates the two sides of the property at explicit elements. For the
/// R^2 conditions y is ignored.
std::pair<Element, Element> operator_property_sides(const Algebra& a, const LinearOperator& r,
                                                    const OperatorProperty& p, const Element& x, const Element& y);

}  // namespace opalg
