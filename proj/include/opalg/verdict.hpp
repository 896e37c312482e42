#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "opalg/element.hpp"

namespace opalg {

/// Concrete counterexample: the basis tuple (or, for sampled checks, the
/// explicit arguments) at which the two sides of an identity differ.
struct Witness {
  std::vector<std::size_t> indices;
  std::vector<Element> arguments;
  Element lhs;
  Element rhs;
  /// Parameter values of the grid point, for parametric certification.
  std::vector<Scalar> parameters;
};

struct Verdict {
  bool pass = true;
  std::optional<Witness> witness;
  /// Short human-readable context for failures that have no witness tuple
  /// (for example an operator that cannot be induced at a grid point).
  std::string detail;

  explicit operator bool() const { return pass; }

  static Verdict ok() { return {}; }
  static Verdict failed(Witness w, std::string detail = {}) {
    return Verdict{false, std::move(w), std::move(detail)};
  }
  static Verdict failed(std::string detail) { return Verdict{false, std::nullopt, std::move(detail)}; }
};

/// One line: "pass" or "fail at (0, 1): lhs=(...) rhs=(...)".
std::string describe(const Verdict& verdict);

}  // namespace opalg
