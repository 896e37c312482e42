#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/operator.hpp"

namespace opalg {

enum class Construction {
  commutator,         // [x,y] = xy - yx
  lie_endo,           // [x,y] = xR(y) - yR(x)
  lie_endo_alt,       // [x,y] = R(x)y - R(y)x
  jordan_plus,        // x*y = xy + yx
  jordan_endo_left,   // x.y = R(x)y
  jordan_endo_right,  // x.y = xR(y)
  jordan_endo_both,   // x.y = R(x)R(y)
  leibniz_comm,       // [x,y] = R(x)y - yR(x)
  leibniz_endo,       // [x,y] = R(x)y - R(y)R(x)
  prelie_endo,        // x.y = R(x)R(y) - yR(x)
  prelie_endo_alt,    // x.y = R(x)y - R(y)R(x)
  prelie_diff,        // x.y = R(x)y
  novikov_affine,     // x*y = xR(y) + a xy
  prelie_rb1,         // x*y = R(x)y - yR(x) - xy
  flexible_avg,       // x.y = R(xy)
};

struct ConstructionSpec {
  Construction name = Construction::commutator;
  /// `a` for novikov_affine; empty otherwise.
  std::vector<Scalar> params;
};

std::string_view to_string(Construction c);
Construction parse_construction(std::string_view name);
const std::vector<Construction>& all_constructions();
bool requires_operator(Construction c);
std::size_t parameter_count(Construction c);

/// Materializes the derived product as structure constants in the basis of
/// `a`. Provenance (construction, source and operator fingerprints) is stored
/// in the metadata. Errors on a missing operator, dimension mismatch or wrong
/// parameter count.
Algebra derive(const Algebra& a, const ConstructionSpec& spec);
Algebra derive(const Algebra& a, const LinearOperator& r, const ConstructionSpec& spec);

/// rows x cols matrices with the entrywise product; basis E_ij row-major.
Algebra hadamard_algebra(std::size_t rows, std::size_t cols);

}  // namespace opalg
