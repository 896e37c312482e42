#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "opalg/scalar.hpp"
#include "opalg/verdict.hpp"

namespace opalg {

/// One parameter of a family: its name, the declared maximum degree of the
/// checked condition in it, and the grid values to instantiate.
struct ParameterGrid {
  std::string name;
  unsigned degree = 0;
  std::vector<Scalar> values;
};

class GridTooSmallError : public Error {
 public:
  using Error::Error;
};

/// Runs `check` at every point of the product grid (first parameter varies
/// slowest) and passes iff every point passes. When each parameter's grid has
/// more distinct values than its declared degree, a polynomial condition that
/// vanishes on the grid vanishes identically, so a pass certifies the
/// condition for all rational parameter values. Errors with GridTooSmallError
/// on a grid with duplicates or at most `degree` values. On failure the
/// returned witness (if the check supplied one) carries the grid point.
Verdict certify_parametric(std::span<const ParameterGrid> grid,
                           const std::function<Verdict(std::span<const Scalar>)>& check);

}  // namespace opalg
