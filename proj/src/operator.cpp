#include "opalg/operator.hpp"

#include <array>
#include <cctype>

#include "detail.hpp"

namespace opalg {

LinearOperator::LinearOperator(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionError("operator matrix must be square");
  if (matrix_.rows() == 0) throw DimensionError("operator matrix must be non-empty");
}

Element LinearOperator::operator()(const Element& x) const {
  if (x.dim() != dim()) throw DimensionError("operator applied to element of wrong dimension");
  std::vector<Scalar> v(x.coords().begin(), x.coords().end());
  return Element(matrix_ * v);
}

LinearOperator make_operator(const Algebra& a, Matrix matrix) {
  if (matrix.rows() != a.dim() || matrix.cols() != a.dim()) {
    throw DimensionError("operator matrix is " + std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) +
                         " but the algebra has dimension " + std::to_string(a.dim()));
  }
  return LinearOperator(std::move(matrix));
}

std::string fingerprint(const LinearOperator& r) {
  std::vector<std::string> parts{"operator", std::to_string(r.dim())};
  for (const auto& c : r.matrix().data()) parts.push_back(to_string(c));
  return detail::fnv1a_hex(parts);
}

SpanEscapeError::SpanEscapeError(std::size_t index, Element res)
    : Error("u * b" + std::to_string(index) + " is not in the span; residual " + to_string(res)),
      basis_index(index),
      residual(std::move(res)) {}

LinearOperator left_multiplication_operator(const Embedding& emb, const Element& u) {
  if (u.dim() != emb.ambient().dim()) throw DimensionError("u has wrong ambient dimension");
  const std::size_t m = emb.dim();
  Matrix mat(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    const Element image = multiply(emb.ambient(), u, emb.basis()[j]);
    auto coords = emb.coordinates(image);
    if (!coords) throw SpanEscapeError(j, emb.residual(image));
    for (std::size_t i = 0; i < m; ++i) mat(i, j) = (*coords)[i];
  }
  return LinearOperator(std::move(mat));
}

namespace {

struct KindInfo {
  OperatorKind kind;
  std::string_view name;
  std::size_t params;
  bool bilinear;
};

constexpr std::array<KindInfo, 10> kKinds{{
    {OperatorKind::endomorphism, "endomorphism", 0, true},
    {OperatorKind::idempotent_op, "idempotent_op", 0, false},
    {OperatorKind::involution_op, "involution_op", 0, false},
    {OperatorKind::scaled_idempotent_op, "scaled_idempotent_op", 1, false},
    {OperatorKind::scaled_involution_op, "scaled_involution_op", 1, false},
    {OperatorKind::derivation, "derivation", 0, true},
    {OperatorKind::left_averaging, "left_averaging", 0, true},
    {OperatorKind::rota_baxter, "rota_baxter", 1, true},
    {OperatorKind::rota_baxter_mirrored, "rota_baxter_mirrored", 1, true},
    {OperatorKind::rota_baxter_weighted, "rota_baxter_weighted", 2, true},
}};

const KindInfo& info(OperatorKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k;
  throw Error("unknown operator kind");
}

void validate(const OperatorProperty& p) {
  const auto& k = info(p.kind);
  if (p.params.size() != k.params) {
    throw Error("operator property " + std::string(k.name) + " takes " + std::to_string(k.params) +
                " parameter(s), got " + std::to_string(p.params.size()));
  }
}

}  // namespace

std::size_t parameter_count(OperatorKind kind) { return info(kind).params; }
std::string_view to_string(OperatorKind kind) { return info(kind).name; }

const std::vector<OperatorKind>& all_operator_kinds() {
  static const std::vector<OperatorKind> kinds = [] {
    std::vector<OperatorKind> v;
    for (const auto& k : kKinds) v.push_back(k.kind);
    return v;
  }();
  return kinds;
}

OperatorKind parse_operator_kind(std::string_view name) {
  for (const auto& k : kKinds)
    if (k.name == name) return k.kind;
  throw ParseError("unknown operator property '" + std::string(name) + "'");
}

OperatorProperty parse_operator_property(std::string_view text) {
  const auto call = detail::split_call(text);
  OperatorProperty p{parse_operator_kind(call.name), {}};
  for (const auto& arg : call.args) p.params.push_back(parse_scalar(arg));
  if (p.params.size() != parameter_count(p.kind)) {
    throw ParseError("operator property " + call.name + " takes " + std::to_string(parameter_count(p.kind)) +
                     " parameter(s), got " + std::to_string(p.params.size()));
  }
  return p;
}

std::string to_string(const OperatorProperty& p) {
  std::string out(to_string(p.kind));
  if (!p.params.empty()) {
    out += "(";
    for (std::size_t i = 0; i < p.params.size(); ++i) out += (i ? "," : "") + to_string(p.params[i]);
    out += ")";
  }
  return out;
}

std::pair<Element, Element> operator_property_sides(const Algebra& a, const LinearOperator& r,
                                                    const OperatorProperty& p, const Element& x, const Element& y) {
  validate(p);
  if (r.dim() != a.dim()) throw DimensionError("operator and algebra dimensions differ");
  auto mul = [&a](const Element& u, const Element& v) { return multiply(a, u, v); };
  switch (p.kind) {
    case OperatorKind::endomorphism:
      return {mul(r(x), r(y)), r(mul(x, y))};
    case OperatorKind::idempotent_op:
      return {r(r(x)), r(x)};
    case OperatorKind::involution_op:
      return {r(r(x)), x};
    case OperatorKind::scaled_idempotent_op:
      return {r(r(x)), p.params[0] * r(x)};
    case OperatorKind::scaled_involution_op:
      return {r(r(x)), p.params[0] * x};
    case OperatorKind::derivation:
      return {r(mul(x, y)), mul(r(x), y) + mul(x, r(y))};
    case OperatorKind::left_averaging:
      return {mul(r(x), r(y)), r(mul(r(x), y))};
    case OperatorKind::rota_baxter: {
      Element inner = mul(r(x), y) + mul(x, r(y));
      inner.add_scaled(p.params[0], mul(x, y));
      return {mul(r(x), r(y)), r(inner)};
    }
    case OperatorKind::rota_baxter_mirrored: {
      Element inner = mul(r(x), y) + mul(y, r(x));
      inner.add_scaled(p.params[0], mul(x, y));
      return {mul(r(x), r(y)), r(inner)};
    }
    case OperatorKind::rota_baxter_weighted: {
      const Element xy = mul(x, y);
      Element inner = mul(r(x), y) + mul(x, r(y));
      inner.add_scaled(p.params[0], xy);
      Element rhs = r(inner);
      rhs.add_scaled(p.params[1], xy);
      return {mul(r(x), r(y)), std::move(rhs)};
    }
  }
  throw Error("unknown operator kind");
}

Verdict check_operator_property(const Algebra& a, const LinearOperator& r, const OperatorProperty& p) {
  validate(p);
  if (r.dim() != a.dim()) throw DimensionError("operator and algebra dimensions differ");
  const std::size_t n = a.dim();
  const bool bilinear = info(p.kind).bilinear;
  const Element zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Element x = Element::basis(n, i);
    for (std::size_t j = 0; j < (bilinear ? n : 1); ++j) {
      const Element y = bilinear ? Element::basis(n, j) : zero;
      auto [lhs, rhs] = operator_property_sides(a, r, p, x, y);
      if (lhs != rhs) {
        Witness w;
        w.indices = bilinear ? std::vector<std::size_t>{i, j} : std::vector<std::size_t>{i};
        w.arguments = bilinear ? std::vector<Element>{x, y} : std::vector<Element>{x};
        w.lhs = std::move(lhs);
        w.rhs = std::move(rhs);
        return Verdict::failed(std::move(w), to_string(p));
      }
    }
  }
  return Verdict::ok();
}

}  // namespace opalg
