#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/verdict.hpp"

namespace opalg {

/// Linear side conditions on an ambient element u relative to the span A of
/// an embedding (b ranges over the basis of A).
enum class LinearConstraint {
  right_identity,     // b u = b
  right_annihilator,  // b u = 0
  centralize,         // b u = u b
  stabilize,          // u b in A
};

std::string_view to_string(LinearConstraint c);
LinearConstraint parse_linear_constraint(std::string_view name);

enum class QuadraticKind {
  idempotent,       // u^2 = u
  skew_idempotent,  // u^2 = -u
  nilpotent2,       // u^2 = 0
  rb_weighted,      // u^2 = -l u - b 1, params (l, b)
  scaled,           // u^2 = g u, params (g)
};

struct QuadraticConstraint {
  QuadraticKind kind = QuadraticKind::idempotent;
  std::vector<Scalar> params;
  /// Unit used by rb_weighted; defaults to the ambient's two-sided identity.
  std::optional<Element> unit;
};

/// Bare name, without parameters: "rb_weighted".
QuadraticKind parse_quadratic_kind(std::string_view name);
/// "idempotent", "rb_weighted(1,2)", "scaled(6)".
QuadraticConstraint parse_quadratic(std::string_view text);
std::string to_string(const QuadraticConstraint& q);

/// offset + sum t_i directions_i. Direction i has coordinate 1 at
/// free_coordinates[i] and 0 at the other free coordinates, and the offset is
/// 0 there, so the parameters of a point are its free coordinates.
struct AffineSpace {
  std::optional<Element> offset;  // nullopt: no solution
  std::vector<Element> directions;
  std::vector<std::size_t> free_coordinates;

  bool empty() const { return !offset.has_value(); }
  std::size_t dimension() const { return directions.size(); }
  Element at(std::span<const Scalar> parameters) const;
  /// Parameters of u if u lies in the space.
  std::optional<std::vector<Scalar>> parameters_of(const Element& u) const;
};

/// Exact solution set of the combined linear constraints in the ambient
/// coordinates of u. An inconsistent system yields an empty space.
AffineSpace solve_linear(const Embedding& emb, std::span<const LinearConstraint> lin);

/// Substitute each parameter tuple into the affine parametrization.
struct GridStrategy {
  std::vector<std::vector<Scalar>> points;
};

/// Pin every affine parameter except `free_parameter` (pinned values in order,
/// skipping the free one) and solve the resulting vector quadratic in one
/// unknown exactly.
struct UnivariateStrategy {
  std::size_t free_parameter = 0;
  std::vector<Scalar> pinned;
};

using SearchStrategy = std::variant<GridStrategy, UnivariateStrategy>;

struct SearchResult {
  std::vector<Element> elements;
  /// Univariate only: solutions exist over a quadratic extension of Q but
  /// none are rational. No approximate values are produced.
  bool irrational_solutions = false;
  /// Univariate only: every point of the line satisfies the constraints;
  /// `elements` then holds the point with the free parameter 0.
  bool entire_line = false;
};

/// Errors when a grid point or the pinned values have the wrong length.
SearchResult find_special(const Embedding& emb, std::span<const LinearConstraint> lin,
                          const QuadraticConstraint& quad, const SearchStrategy& strategy);

struct ElementCheck {
  std::string constraint;
  Verdict verdict;
};

struct ElementReport {
  std::vector<ElementCheck> checks;
  bool pass() const;
};

/// Itemized pointwise check, linear constraints first.
ElementReport verify_element(const Embedding& emb, const Element& u, std::span<const LinearConstraint> lin,
                             const std::optional<QuadraticConstraint>& quad);

Verdict check_linear(const Embedding& emb, const Element& u, LinearConstraint c);
Verdict check_quadratic(const Algebra& ambient, const Element& u, const QuadraticConstraint& q);

}  // namespace opalg
