#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "opalg/scalar.hpp"

namespace opalg {

using Bindings = std::map<std::string, Scalar, std::less<>>;

/// Rational expression over named parameters, as used in parametrized
/// fixtures: integers, identifiers, + - * /, ^ with a non-negative integer
/// exponent, unary minus and parentheses. "(-x^2-x)/y", "1-b", "x*y".
class Expression {
 public:
  static Expression parse(std::string_view text);
  static Expression constant(const Scalar& value);

  /// Errors on unbound identifiers and division by zero.
  Scalar evaluate(const Bindings& bindings) const;
  const std::set<std::string>& identifiers() const { return identifiers_; }
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::set<std::string> identifiers_;
  std::string text_;
};

}  // namespace opalg
