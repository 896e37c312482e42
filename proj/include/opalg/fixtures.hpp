#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "opalg/algebra.hpp"
#include "opalg/constructions.hpp"
#include "opalg/expr.hpp"
#include "opalg/operator.hpp"
#include "opalg/parametric.hpp"
#include "opalg/search.hpp"

namespace opalg {

/// Ambient algebra of a fixture: full matrices with the usual product, or
/// matrices with the entrywise (Hadamard) product.
struct AmbientSpec {
  enum class Kind { matrix, hadamard } kind = Kind::matrix;
  std::size_t rows = 0;
  std::size_t cols = 0;

  Algebra build() const;
};

/// A derived product, computed from an earlier algebra of the fixture ("A"
/// or another derived name) with the fixture's operator.
struct DerivedSpec {
  std::string name;
  std::string from;
  Construction construction = Construction::commutator;
  std::vector<Expression> params;
};

/// One expected verdict. `check` is "family:name(args)" with family one of
/// identity, operator, element, search; arguments may be parameter
/// expressions. `on` names the algebra the check runs on.
struct FixtureRow {
  std::string check;
  std::string on = "A";
  std::vector<LinearConstraint> lin;  // search rows only
  std::string expect;                 // "pass" or "fail"
};

/// Perturbation that must flip the verdict of `target` at the sample point.
struct NegativeControl {
  enum class Kind { shift_u, shift_operator } kind = Kind::shift_u;
  std::size_t by = 0;  // shift_u: flat ambient index of u that gets +1
  FixtureRow target;
};

struct FixtureBundle {
  std::string name;
  std::string description;
  std::string notes;
  AmbientSpec ambient;
  /// Ambient in which u acts, if it differs from the product ambient. The
  /// basis coordinates are shared.
  std::optional<AmbientSpec> operator_ambient;
  std::vector<std::string> labels;
  std::vector<std::vector<Expression>> basis;  // ambient coordinates, row-major
  std::vector<ParameterGrid> parameters;
  std::vector<Expression> guards;  // must be nonzero at every grid point
  Bindings sample;
  std::vector<std::vector<Expression>> u;  // ambient matrix rows
  std::vector<DerivedSpec> derived;
  std::vector<FixtureRow> rows;
  NegativeControl negative_control;
};

class UnknownFixtureError : public Error {
 public:
  using Error::Error;
};

/// Catalog order.
std::vector<std::string> list_fixtures();
/// Errors with UnknownFixtureError.
FixtureBundle load_fixture(std::string_view name);
/// Raw JSON document of a built-in fixture.
const std::string& fixture_source(std::string_view name);
FixtureBundle parse_fixture(const nlohmann::json& j);

struct Perturbation {
  enum class Kind { none, shift_u, shift_operator } kind = Kind::none;
  std::size_t by = 0;
};

/// All objects of a fixture at one parameter point.
struct FixtureInstance {
  Algebra ambient;
  Algebra operator_ambient;
  Subalgebra algebra;  // "A" and its embedding in the product ambient
  Embedding u_embedding;  // the same span inside the operator ambient
  Element u;
  std::optional<LinearOperator> op;
  std::string op_error;
  std::map<std::string, Algebra> algebras;
  std::map<std::string, std::string> algebra_errors;
};

/// Errors when a guard vanishes or the basis is degenerate at the point.
FixtureInstance instantiate(const FixtureBundle& f, const Bindings& point, Perturbation perturb = {});

/// Evaluates one row at one instance. Errors when the row cannot be evaluated
/// (unknown check, missing operator or algebra).
Verdict evaluate_row(const FixtureInstance& inst, const FixtureRow& row, const Bindings& point);

struct RowResult {
  FixtureRow row;
  std::string actual;  // "pass", "fail" or "error"
  bool matches = false;
  Verdict verdict;
  std::string error;
};

struct ControlResult {
  std::string base;       // verdict of the target at the sample point
  std::string perturbed;  // verdict after the perturbation
  bool flipped = false;
  std::string detail;
};

struct FixtureReport {
  std::string fixture;
  std::size_t grid_points = 1;
  std::vector<RowResult> rows;
  ControlResult control;
  bool rows_pass() const;
  bool pass() const { return rows_pass() && control.flipped; }
};

/// Every row is certified over the fixture's parameter grid (a row passes iff
/// it passes at every grid point), then the negative control is run at the
/// sample point. Mismatches are reported, never thrown.
FixtureReport verify_fixture(const FixtureBundle& f);
FixtureReport verify_fixture(std::string_view name);

ControlResult run_negative_control(const FixtureBundle& f);

}  // namespace opalg
