#include "opalg/search.hpp"

#include <algorithm>
#include <array>

#include "detail.hpp"

namespace opalg {

namespace {

constexpr std::array<std::pair<LinearConstraint, std::string_view>, 4> kLinear{{
    {LinearConstraint::right_identity, "right_identity"},
    {LinearConstraint::right_annihilator, "right_annihilator"},
    {LinearConstraint::centralize, "centralize"},
    {LinearConstraint::stabilize, "stabilize"},
}};

struct QuadInfo {
  QuadraticKind kind;
  std::string_view name;
  std::size_t params;
};

constexpr std::array<QuadInfo, 5> kQuadratic{{
    {QuadraticKind::idempotent, "idempotent", 0},
    {QuadraticKind::skew_idempotent, "skew_idempotent", 0},
    {QuadraticKind::nilpotent2, "nilpotent2", 0},
    {QuadraticKind::rb_weighted, "rb_weighted", 2},
    {QuadraticKind::scaled, "scaled", 1},
}};

const QuadInfo& quad_info(QuadraticKind k) {
  for (const auto& q : kQuadratic)
    if (q.kind == k) return q;
  throw Error("unknown quadratic constraint");
}

/// u^2 = a u + b 1
struct QuadraticForm {
  Scalar a;
  Scalar b;
  Element unit;  // only meaningful when b != 0
};

QuadraticForm normal_form(const Algebra& ambient, const QuadraticConstraint& q) {
  const auto& info = quad_info(q.kind);
  if (q.params.size() != info.params) {
    throw Error("quadratic constraint " + std::string(info.name) + " takes " + std::to_string(info.params) +
                " parameter(s), got " + std::to_string(q.params.size()));
  }
  QuadraticForm f;
  switch (q.kind) {
    case QuadraticKind::idempotent:
      f.a = 1;
      break;
    case QuadraticKind::skew_idempotent:
      f.a = -1;
      break;
    case QuadraticKind::nilpotent2:
      break;
    case QuadraticKind::rb_weighted:
      f.a = -q.params[0];
      f.b = -q.params[1];
      break;
    case QuadraticKind::scaled:
      f.a = q.params[0];
      break;
  }
  if (q.kind == QuadraticKind::rb_weighted) {
    if (q.unit) {
      if (q.unit->dim() != ambient.dim()) throw DimensionError("unit has wrong ambient dimension");
      f.unit = *q.unit;
    } else {
      auto one = identity_element(ambient);
      if (!one) throw Error("rb_weighted needs a unit but the ambient algebra has no identity element");
      f.unit = std::move(*one);
    }
  } else {
    f.unit = Element(ambient.dim());
  }
  return f;
}

/// Residual u^2 - a u - b 1 (zero iff the constraint holds).
Element quadratic_residual(const Algebra& ambient, const Element& u, const QuadraticForm& f) {
  Element r = multiply(ambient, u, u);
  r.add_scaled(-f.a, u);
  r.add_scaled(-f.b, f.unit);
  return r;
}

/// Rows (one block of ambient-dim rows per basis element) of the linear map
/// u -> (condition on b_i u, u b_i), together with the right-hand side.
void append_rows(const Embedding& emb, LinearConstraint c, std::vector<std::vector<Scalar>>& rows,
                 std::vector<Scalar>& rhs) {
  const Algebra& amb = emb.ambient();
  const std::size_t big = amb.dim();
  const Matrix& ann = emb.annihilator();
  for (const auto& b : emb.basis()) {
    // left[q] = b e_q, right[q] = e_q b
    std::vector<Element> left(big), right(big);
    for (std::size_t q = 0; q < big; ++q) {
      const Element e = Element::basis(big, q);
      left[q] = multiply(amb, b, e);
      right[q] = multiply(amb, e, b);
    }
    switch (c) {
      case LinearConstraint::right_identity:
      case LinearConstraint::right_annihilator:
      case LinearConstraint::centralize:
        for (std::size_t k = 0; k < big; ++k) {
          std::vector<Scalar> row(big);
          for (std::size_t q = 0; q < big; ++q) {
            row[q] = left[q][k];
            if (c == LinearConstraint::centralize) row[q] -= right[q][k];
          }
          rows.push_back(std::move(row));
          rhs.push_back(c == LinearConstraint::right_identity ? b[k] : Scalar(0));
        }
        break;
      case LinearConstraint::stabilize:
        for (std::size_t r = 0; r < ann.rows(); ++r) {
          std::vector<Scalar> row(big);
          for (std::size_t q = 0; q < big; ++q)
            for (std::size_t k = 0; k < big; ++k) row[q] += ann(r, k) * right[q][k];
          rows.push_back(std::move(row));
          rhs.push_back(0);
        }
        break;
    }
  }
}

bool is_rational_square(const Scalar& q) {
  return sgn(q) >= 0 && mpz_perfect_square_p(q.get_num_mpz_t()) != 0 && mpz_perfect_square_p(q.get_den_mpz_t()) != 0;
}

Scalar rational_sqrt(const Scalar& q) {
  mpz_class num, den;
  mpz_sqrt(num.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), q.get_den_mpz_t());
  Scalar r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

std::string_view to_string(LinearConstraint c) {
  for (const auto& [k, name] : kLinear)
    if (k == c) return name;
  throw Error("unknown linear constraint");
}

LinearConstraint parse_linear_constraint(std::string_view name) {
  for (const auto& [k, label] : kLinear)
    if (label == detail::trim(name)) return k;
  throw ParseError("unknown linear constraint '" + std::string(name) + "'");
}

QuadraticKind parse_quadratic_kind(std::string_view name) {
  for (const auto& q : kQuadratic)
    if (q.name == name) return q.kind;
  throw ParseError("unknown quadratic constraint '" + std::string(name) + "'");
}

QuadraticConstraint parse_quadratic(std::string_view text) {
  const auto call = detail::split_call(text);
  for (const auto& q : kQuadratic) {
    if (q.name != call.name) continue;
    if (call.args.size() != q.params) {
      throw ParseError("quadratic constraint " + call.name + " takes " + std::to_string(q.params) + " parameter(s)");
    }
    QuadraticConstraint out{q.kind, {}, std::nullopt};
    for (const auto& a : call.args) out.params.push_back(parse_scalar(a));
    return out;
  }
  throw ParseError("unknown quadratic constraint '" + call.name + "'");
}

std::string to_string(const QuadraticConstraint& q) {
  std::string out(quad_info(q.kind).name);
  if (!q.params.empty()) {
    out += "(";
    for (std::size_t i = 0; i < q.params.size(); ++i) out += (i ? "," : "") + to_string(q.params[i]);
    out += ")";
  }
  return out;
}

Element AffineSpace::at(std::span<const Scalar> parameters) const {
  if (!offset) throw Error("affine space is empty");
  if (parameters.size() != directions.size()) {
    throw DimensionError("affine space has " + std::to_string(directions.size()) + " parameters, got " +
                         std::to_string(parameters.size()));
  }
  Element u = *offset;
  for (std::size_t i = 0; i < directions.size(); ++i) u.add_scaled(parameters[i], directions[i]);
  return u;
}

std::optional<std::vector<Scalar>> AffineSpace::parameters_of(const Element& u) const {
  if (!offset || u.dim() != offset->dim()) return std::nullopt;
  std::vector<Scalar> t;
  for (auto c : free_coordinates) t.push_back(u[c]);
  if (at(t) != u) return std::nullopt;
  return t;
}

AffineSpace solve_linear(const Embedding& emb, std::span<const LinearConstraint> lin) {
  const std::size_t big = emb.ambient().dim();
  std::vector<std::vector<Scalar>> rows;
  std::vector<Scalar> rhs;
  for (auto c : lin) append_rows(emb, c, rows, rhs);

  AffineSpace space;
  if (rows.empty()) {
    space.offset = Element(big);
    for (std::size_t q = 0; q < big; ++q) {
      space.directions.push_back(Element::basis(big, q));
      space.free_coordinates.push_back(q);
    }
    return space;
  }
  Matrix m(rows.size(), big);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t q = 0; q < big; ++q) m(r, q) = rows[r][q];
  auto sol = solve(m, rhs);
  if (!sol) return space;
  space.offset = Element(std::move(sol->particular));
  for (auto& d : sol->directions) space.directions.emplace_back(std::move(d));
  space.free_coordinates = std::move(sol->free_columns);
  return space;
}

SearchResult find_special(const Embedding& emb, std::span<const LinearConstraint> lin,
                          const QuadraticConstraint& quad, const SearchStrategy& strategy) {
  const Algebra& amb = emb.ambient();
  const QuadraticForm form = normal_form(amb, quad);
  const AffineSpace space = solve_linear(emb, lin);
  SearchResult result;

  if (const auto* grid = std::get_if<GridStrategy>(&strategy)) {
    for (const auto& point : grid->points) {
      if (point.size() != space.dimension()) {
        throw Error("grid point has " + std::to_string(point.size()) + " coordinates but the solution space has " +
                    std::to_string(space.dimension()) + " parameters");
      }
    }
    if (space.empty()) return result;
    for (const auto& point : grid->points) {
      Element u = space.at(point);
      if (quadratic_residual(amb, u, form).is_zero()) result.elements.push_back(std::move(u));
    }
    return result;
  }

  const auto& uni = std::get<UnivariateStrategy>(strategy);
  if (space.empty()) return result;
  const std::size_t dim = space.dimension();
  if (dim == 0) {
    if (!uni.pinned.empty()) throw Error("univariate search: solution space is a single point, nothing to pin");
    if (quadratic_residual(amb, *space.offset, form).is_zero()) result.elements.push_back(*space.offset);
    return result;
  }
  if (uni.free_parameter >= dim || uni.pinned.size() + 1 != dim) {
    throw Error("univariate search needs " + std::to_string(dim - 1) + " pinned values and a free parameter below " +
                std::to_string(dim));
  }

  // u(t) = u0 + t d; residual(t) = C + t B + t^2 A, coordinatewise.
  std::vector<Scalar> params(dim);
  for (std::size_t i = 0, p = 0; i < dim; ++i) params[i] = i == uni.free_parameter ? Scalar(0) : uni.pinned[p++];
  const Element u0 = space.at(params);
  const Element& d = space.directions[uni.free_parameter];
  const Element C = quadratic_residual(amb, u0, form);
  Element B = multiply(amb, u0, d) + multiply(amb, d, u0);
  B.add_scaled(-form.a, d);
  const Element A = multiply(amb, d, d);

  auto point = [&](const Scalar& t) {
    params[uni.free_parameter] = t;
    return space.at(params);
  };

  const std::size_t big = amb.dim();
  std::size_t pivot = big;
  for (std::size_t k = 0; k < big && pivot == big; ++k)
    if (sgn(A[k]) != 0 || sgn(B[k]) != 0 || sgn(C[k]) != 0) pivot = k;
  if (pivot == big) {
    result.entire_line = true;
    result.elements.push_back(point(0));
    return result;
  }

  const Scalar &a = A[pivot], &b = B[pivot], &c = C[pivot];
  std::vector<Scalar> candidates;
  if (sgn(a) == 0) {
    if (sgn(b) != 0) candidates.push_back(-c / b);
  } else {
    const Scalar disc = b * b - 4 * a * c;
    if (sgn(disc) >= 0 && is_rational_square(disc)) {
      const Scalar s = rational_sqrt(disc);
      candidates.push_back((-b - s) / (2 * a));
      if (sgn(s) != 0) candidates.push_back((-b + s) / (2 * a));
      std::sort(candidates.begin(), candidates.end());
    } else if (sgn(disc) > 0) {
      // Irrational real roots solve the whole system only if every
      // coordinate polynomial is a multiple of the pivot one.
      bool proportional = true;
      for (std::size_t k = 0; k < big && proportional; ++k) {
        proportional = A[k] * b == B[k] * a && A[k] * c == C[k] * a;
      }
      result.irrational_solutions = proportional;
    }
  }
  for (const auto& t : candidates) {
    Element u = point(t);
    if (quadratic_residual(amb, u, form).is_zero()) result.elements.push_back(std::move(u));
  }
  return result;
}

bool ElementReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ElementCheck& c) { return c.verdict.pass; });
}

Verdict check_linear(const Embedding& emb, const Element& u, LinearConstraint c) {
  const Algebra& amb = emb.ambient();
  if (u.dim() != amb.dim()) throw DimensionError("u has wrong ambient dimension");
  for (std::size_t i = 0; i < emb.dim(); ++i) {
    const Element& b = emb.basis()[i];
    Element lhs, rhs;
    switch (c) {
      case LinearConstraint::right_identity:
        lhs = multiply(amb, b, u);
        rhs = b;
        break;
      case LinearConstraint::right_annihilator:
        lhs = multiply(amb, b, u);
        rhs = Element(amb.dim());
        break;
      case LinearConstraint::centralize:
        lhs = multiply(amb, b, u);
        rhs = multiply(amb, u, b);
        break;
      case LinearConstraint::stabilize:
        lhs = multiply(amb, u, b);
        rhs = lhs - emb.residual(lhs);  // nearest point of the span
        break;
    }
    if (lhs != rhs) {
      return Verdict::failed(Witness{{i}, {b}, std::move(lhs), std::move(rhs), {}}, std::string(to_string(c)));
    }
  }
  return Verdict::ok();
}

Verdict check_quadratic(const Algebra& ambient, const Element& u, const QuadraticConstraint& q) {
  if (u.dim() != ambient.dim()) throw DimensionError("u has wrong ambient dimension");
  const QuadraticForm f = normal_form(ambient, q);
  Element lhs = multiply(ambient, u, u);
  Element rhs = f.a * u;
  rhs.add_scaled(f.b, f.unit);
  if (lhs != rhs) return Verdict::failed(Witness{{}, {u}, std::move(lhs), std::move(rhs), {}}, to_string(q));
  return Verdict::ok();
}

ElementReport verify_element(const Embedding& emb, const Element& u, std::span<const LinearConstraint> lin,
                             const std::optional<QuadraticConstraint>& quad) {
  ElementReport report;
  for (auto c : lin) report.checks.push_back({std::string(to_string(c)), check_linear(emb, u, c)});
  if (quad) report.checks.push_back({to_string(*quad), check_quadratic(emb.ambient(), u, *quad)});
  return report;
}

}  // namespace opalg
