#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/verdict.hpp"

namespace opalg {

enum class IdentityName {
  antisymmetry,        // xy = -yx
  jacobi,              // x(yz) + z(xy) + y(zx) = 0
  left_leibniz,        // x(yz) = (xy)z + y(xz)
  left_prelie,         // (xy)z - x(yz) = (yx)z - y(xz)
  flexible,            // (xy)x = x(yx)
  jordan_flex,         // (xy)x = x(yx)
  jordan_main,         // ((xx)y)x = (xx)(yx)
  novikov_right_comm,  // (xy)z = (xz)y
  associativity,       // (xy)z = x(yz)
  commutativity,       // xy = yx
};

const std::vector<IdentityName>& all_identities();
std::string_view to_string(IdentityName id);
IdentityName parse_identity_name(std::string_view name);

/// A non-associative monomial in postfix form: values >= 0 are leaves
/// (variable or slot indices), kProduct multiplies the two topmost operands.
/// "(x y) z" is {0, 1, kProduct, 2, kProduct}.
inline constexpr int kProduct = -1;

struct Term {
  long coeff = 1;
  std::vector<int> word;
};

struct FormalIdentity {
  IdentityName name;
  std::vector<std::string> variables;
  /// Degree of each variable in every term (identities are multihomogeneous).
  std::vector<unsigned> degrees;
  /// Number of products in every term (identities are homogeneous in it).
  unsigned products = 0;
  std::vector<Term> lhs;
  std::vector<Term> rhs;
};

const FormalIdentity& formal_identity(IdentityName id);

/// Multilinearization of a formal identity. Each variable of degree d is split
/// into d slots; slots are numbered variable by variable, so the basis tuple
/// of a witness lists the slots of the first variable first.
///
/// Over a field of characteristic 0, P(x, y, ...) = 0 for all elements iff
/// the full polarization vanishes on all basis tuples: the polarization is
/// multilinear, and restricting it to the diagonal gives (prod d_i!) * P.
struct Polarization {
  IdentityName identity;
  std::size_t arity = 0;
  std::vector<std::size_t> slot_variable;

  /// Inclusion-exclusion plan: the polarization equals
  ///   sum over subset choices of sign * P(sum of chosen slots per variable).
  struct Subset {
    int sign = 1;
    std::vector<std::vector<std::size_t>> slots;  // per variable
  };
  std::vector<Subset> plan;

  /// The same polarization written as a sum of multilinear terms whose leaves
  /// are slots (sum over all slot assignments of each variable's
  /// occurrences). Equal terms are merged.
  std::vector<Term> lhs;
  std::vector<Term> rhs;
  unsigned products = 0;
};

const Polarization& polarization(IdentityName id);

/// Raw identity sides at explicit arguments (one per variable).
std::pair<Element, Element> evaluate_identity(const Algebra& a, IdentityName id, std::span<const Element> args);

/// Polarized sides at a basis tuple, evaluated literally by inclusion-exclusion.
std::pair<Element, Element> evaluate_inclusion_exclusion(const Algebra& a, const Polarization& pol,
                                                         std::span<const std::size_t> tuple);

/// Polarized sides at a basis tuple, evaluated from the multilinear terms.
std::pair<Element, Element> evaluate_multilinear(const Algebra& a, const Polarization& pol,
                                                 std::span<const std::size_t> tuple);

enum class Engine {
  parallel,   // integer-scaled OpenMP kernel with memoized subtree tables
  reference,  // serial, literal inclusion-exclusion in Q
};

/// Exact: pass iff the identity holds for all elements. On failure the
/// witness is the lexicographically first failing basis tuple (slot order)
/// with both polarized sides. Both engines return identical verdicts.
Verdict check_identity(const Algebra& a, IdentityName id, Engine engine = Engine::parallel);

/// Evaluates the raw identity at pseudo-random elements with coordinates
/// p/q, |p| <= 5, 1 <= q <= 4. Deterministic given the seed.
Verdict check_identity_random(const Algebra& a, IdentityName id, unsigned trials, std::uint64_t seed);

}  // namespace opalg
