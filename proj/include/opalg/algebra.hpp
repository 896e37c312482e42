#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opalg/element.hpp"
#include "opalg/linalg.hpp"
#include "opalg/scalar.hpp"
#include "opalg/verdict.hpp"

namespace opalg {

struct ScEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  Scalar value;
};

/// Finite-dimensional algebra over Q given by dense structure constants:
/// e_i e_j = sum_k sc(i, j, k) e_k.
///
/// Immutable after construction. The associative/commutative flags are a
/// write-once cache shared between copies; they are filled the first time the
/// corresponding predicate runs.
class Algebra {
 public:
  Algebra(std::size_t dim, std::vector<Scalar> dense_sc, std::vector<std::string> labels = {});

  std::size_t dim() const { return dim_; }
  const Scalar& sc(std::size_t i, std::size_t j, std::size_t k) const { return sc_[(i * dim_ + j) * dim_ + k]; }
  /// Coordinates of e_i e_j.
  std::span<const Scalar> basis_product(std::size_t i, std::size_t j) const {
    return {sc_.data() + (i * dim_ + j) * dim_, dim_};
  }
  std::span<const Scalar> structure_constants() const { return sc_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Free-form provenance (construction name, source and operator
  /// fingerprints). Not part of the algebra's identity.
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  Algebra with_metadata(std::map<std::string, std::string> metadata) const;

  std::optional<bool> cached_associative() const;
  std::optional<bool> cached_commutative() const;

 private:
  friend Verdict is_associative(const Algebra&);
  friend Verdict is_commutative(const Algebra&);
  struct FlagCache;

  std::size_t dim_;
  std::vector<Scalar> sc_;
  std::vector<std::string> labels_;
  std::map<std::string, std::string> metadata_;
  std::shared_ptr<FlagCache> flags_;
};

/// Errors on out-of-range indices and duplicate (i, j, k) triples.
Algebra make_algebra(std::size_t dim, const std::vector<ScEntry>& entries, std::vector<std::string> labels = {});

/// M_n with basis E_ij in row-major order.
Algebra matrix_algebra(std::size_t n);

Element multiply(const Algebra& a, const Element& x, const Element& y);

/// Witness is the lexicographically first failing basis triple (i, j, k).
Verdict is_associative(const Algebra& a);
/// Witness is the lexicographically first failing basis pair (i, j).
Verdict is_commutative(const Algebra& a);

/// Two-sided multiplicative identity, if one exists.
std::optional<Element> identity_element(const Algebra& a);

/// Stable hex fingerprint of dim, structure constants and labels.
std::string fingerprint(const Algebra& a);

class LinearDependenceError : public Error {
 public:
  using Error::Error;
};

class NotClosedError : public Error {
 public:
  NotClosedError(std::size_t i, std::size_t j, Element residual);
  std::size_t i;
  std::size_t j;
  Element residual;
};

/// A linearly independent family of ambient elements together with the
/// coordinate maps between the ambient space and the span.
class Embedding {
 public:
  /// Errors when the family is empty, has mismatched dimensions or is
  /// linearly dependent. No closure check.
  static Embedding of_span(Algebra ambient, std::vector<Element> basis);

  const Algebra& ambient() const { return ambient_; }
  const std::vector<Element>& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }

  /// Span coordinates -> ambient element.
  Element to_ambient(const Element& coords) const;
  /// Ambient element -> span coordinates, or nullopt if outside the span.
  std::optional<Element> coordinates(const Element& v) const;
  /// v minus its reconstruction from the pivot coordinates; zero iff v lies
  /// in the span.
  Element residual(const Element& v) const;
  /// Rows spanning the annihilator of the span: K v = 0 iff v is in the span.
  const Matrix& annihilator() const { return annihilator_; }

 private:
  Embedding(Algebra ambient, std::vector<Element> basis);

  Algebra ambient_;
  std::vector<Element> basis_;
  std::vector<std::size_t> pivot_rows_;
  Matrix pivot_inverse_;
  Matrix annihilator_;
};

struct Subalgebra {
  Algebra algebra;
  Embedding embedding;
};

/// Structure constants of span(basis) in the given basis. Errors with
/// NotClosedError (offending pair and residual) if a product escapes.
Subalgebra induce_subalgebra(const Algebra& ambient, std::vector<Element> basis,
                             std::vector<std::string> labels = {});

}  // namespace opalg
