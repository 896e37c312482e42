#include "opalg/constructions.hpp"

#include <array>

namespace opalg {

namespace {

struct Entry {
  Construction c;
  std::string_view name;
  bool needs_operator;
  std::size_t params;
};

constexpr std::array<Entry, 15> kCatalog{{
    {Construction::commutator, "commutator", false, 0},
    {Construction::lie_endo, "lie_endo", true, 0},
    {Construction::lie_endo_alt, "lie_endo_alt", true, 0},
    {Construction::jordan_plus, "jordan_plus", false, 0},
    {Construction::jordan_endo_left, "jordan_endo_left", true, 0},
    {Construction::jordan_endo_right, "jordan_endo_right", true, 0},
    {Construction::jordan_endo_both, "jordan_endo_both", true, 0},
    {Construction::leibniz_comm, "leibniz_comm", true, 0},
    {Construction::leibniz_endo, "leibniz_endo", true, 0},
    {Construction::prelie_endo, "prelie_endo", true, 0},
    {Construction::prelie_endo_alt, "prelie_endo_alt", true, 0},
    {Construction::prelie_diff, "prelie_diff", true, 0},
    {Construction::novikov_affine, "novikov_affine", true, 1},
    {Construction::prelie_rb1, "prelie_rb1", true, 0},
    {Construction::flexible_avg, "flexible_avg", true, 0},
}};

const Entry& entry(Construction c) {
  for (const auto& e : kCatalog)
    if (e.c == c) return e;
  throw Error("unknown construction");
}

Element new_product(const Algebra& a, const LinearOperator* r, const ConstructionSpec& spec, const Element& x,
                    const Element& y) {
  auto mul = [&a](const Element& u, const Element& v) { return multiply(a, u, v); };
  auto R = [r](const Element& v) { return (*r)(v); };
  switch (spec.name) {
    case Construction::commutator:
      return mul(x, y) - mul(y, x);
    case Construction::lie_endo:
      return mul(x, R(y)) - mul(y, R(x));
    case Construction::lie_endo_alt:
      return mul(R(x), y) - mul(R(y), x);
    case Construction::jordan_plus:
      return mul(x, y) + mul(y, x);
    case Construction::jordan_endo_left:
      return mul(R(x), y);
    case Construction::jordan_endo_right:
      return mul(x, R(y));
    case Construction::jordan_endo_both:
      return mul(R(x), R(y));
    case Construction::leibniz_comm:
      return mul(R(x), y) - mul(y, R(x));
    case Construction::leibniz_endo:
      return mul(R(x), y) - mul(R(y), R(x));
    case Construction::prelie_endo:
      return mul(R(x), R(y)) - mul(y, R(x));
    case Construction::prelie_endo_alt:
      return mul(R(x), y) - mul(R(y), R(x));
    case Construction::prelie_diff:
      return mul(R(x), y);
    case Construction::novikov_affine: {
      Element out = mul(x, R(y));
      return out.add_scaled(spec.params[0], mul(x, y));
    }
    case Construction::prelie_rb1:
      return mul(R(x), y) - mul(y, R(x)) - mul(x, y);
    case Construction::flexible_avg:
      return R(mul(x, y));
  }
  throw Error("unknown construction");
}

Algebra derive_impl(const Algebra& a, const LinearOperator* r, const ConstructionSpec& spec) {
  const Entry& e = entry(spec.name);
  if (spec.params.size() != e.params) {
    throw Error("construction " + std::string(e.name) + " takes " + std::to_string(e.params) + " parameter(s), got " +
                std::to_string(spec.params.size()));
  }
  if (e.needs_operator && r == nullptr) throw Error("construction " + std::string(e.name) + " requires an operator");
  if (r != nullptr && r->dim() != a.dim()) throw DimensionError("operator and algebra dimensions differ");

  const std::size_t n = a.dim();
  std::vector<Scalar> sc(n * n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Element x = Element::basis(n, i);
    for (std::size_t j = 0; j < n; ++j) {
      const Element p = new_product(a, r, spec, x, Element::basis(n, j));
      for (std::size_t k = 0; k < n; ++k) sc[(i * n + j) * n + k] = p[k];
    }
  }
  std::map<std::string, std::string> meta{{"construction", std::string(e.name)}, {"source", fingerprint(a)}};
  if (e.needs_operator) meta["operator"] = fingerprint(*r);
  if (!spec.params.empty()) meta["a"] = to_string(spec.params[0]);
  return Algebra(n, std::move(sc), a.labels()).with_metadata(std::move(meta));
}

}  // namespace

std::string_view to_string(Construction c) { return entry(c).name; }
bool requires_operator(Construction c) { return entry(c).needs_operator; }
std::size_t parameter_count(Construction c) { return entry(c).params; }

Construction parse_construction(std::string_view name) {
  for (const auto& e : kCatalog)
    if (e.name == name) return e.c;
  throw ParseError("unknown construction '" + std::string(name) + "'");
}

const std::vector<Construction>& all_constructions() {
  static const std::vector<Construction> all = [] {
    std::vector<Construction> v;
    for (const auto& e : kCatalog) v.push_back(e.c);
    return v;
  }();
  return all;
}

Algebra derive(const Algebra& a, const ConstructionSpec& spec) { return derive_impl(a, nullptr, spec); }

Algebra derive(const Algebra& a, const LinearOperator& r, const ConstructionSpec& spec) {
  return derive_impl(a, &r, spec);
}

Algebra hadamard_algebra(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw DimensionError("hadamard algebra needs positive rows and cols");
  const std::size_t d = rows * cols;
  std::vector<Scalar> sc(d * d * d);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t e = i * cols + j;
      sc[(e * d + e) * d + e] = 1;
      labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  }
  return Algebra(d, std::move(sc), std::move(labels));
}

}  // namespace opalg
