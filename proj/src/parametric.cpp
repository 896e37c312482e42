#include "opalg/parametric.hpp"

#include <set>

namespace opalg {

Verdict certify_parametric(std::span<const ParameterGrid> grid,
                           const std::function<Verdict(std::span<const Scalar>)>& check) {
  for (const auto& p : grid) {
    const std::set<Scalar> distinct(p.values.begin(), p.values.end());
    if (distinct.size() != p.values.size()) throw GridTooSmallError("grid for '" + p.name + "' has duplicate values");
    if (p.values.size() <= p.degree) {
      throw GridTooSmallError("grid for '" + p.name + "' has " + std::to_string(p.values.size()) +
                              " values but the declared degree " + std::to_string(p.degree) + " needs at least " +
                              std::to_string(p.degree + 1));
    }
  }

  std::vector<std::size_t> index(grid.size(), 0);
  std::vector<Scalar> point(grid.size());
  while (true) {
    for (std::size_t i = 0; i < grid.size(); ++i) point[i] = grid[i].values[index[i]];
    Verdict v = check(point);
    if (!v.pass) {
      if (!v.witness) v.witness = Witness{};
      v.witness->parameters = point;
      return v;
    }
    std::size_t i = grid.size();
    while (i > 0 && ++index[i - 1] == grid[i - 1].values.size()) index[--i] = 0;
    if (i == 0) return Verdict::ok();
  }
}

}  // namespace opalg
