#include "opalg/kernels.hpp"

namespace opalg::kernels {

std::optional<std::vector<std::size_t>> first_failing_tuple_reference(const Algebra& a, const Polarization& pol) {
  const std::size_t n = a.dim();
  std::vector<std::size_t> tuple(pol.arity, 0);
  while (true) {
    const auto [lhs, rhs] = evaluate_inclusion_exclusion(a, pol, tuple);
    if (lhs != rhs) return tuple;
    // Lexicographic successor, last slot fastest.
    std::size_t s = pol.arity;
    while (s > 0 && ++tuple[s - 1] == n) tuple[--s] = 0;
    if (s == 0) return std::nullopt;
  }
}

}  // namespace opalg::kernels
