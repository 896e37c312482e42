#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/identity.hpp"

namespace opalg::kernels {

/// Which integer type the parallel kernel runs on. The structure constants are
/// scaled to integers by their common denominator, which is exact because
/// every catalog identity is homogeneous in the number of products.
enum class IntPath {
  automatic,  // int64 when the a-priori magnitude bound allows it, else modular
  int64,      // errors if the bound does not allow it
  modular,    // residues modulo enough 31-bit primes to cover the bound
  bignum,     // GMP integers throughout
};

struct Options {
  IntPath path = IntPath::automatic;
};

/// True if the a-priori bound on every intermediate value of the scaled
/// evaluation fits comfortably in a signed 64-bit integer.
bool fits_int64(const Algebra& a, const Polarization& pol);

/// Lexicographically first basis tuple at which the polarization does not
/// vanish, or nullopt. OpenMP over the flattened tuple index; the result does
/// not depend on the schedule or thread count.
std::optional<std::vector<std::size_t>> first_failing_tuple_parallel(const Algebra& a, const Polarization& pol,
                                                                     Options options = {});

/// Serial reference: literal inclusion-exclusion in exact rationals, tuples in
/// lexicographic order.
std::optional<std::vector<std::size_t>> first_failing_tuple_reference(const Algebra& a, const Polarization& pol);

}  // namespace opalg::kernels
