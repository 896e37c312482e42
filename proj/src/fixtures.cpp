#include "opalg/fixtures.hpp"

#include <algorithm>

#include "detail.hpp"
#include "fixture_data.hpp"
#include "opalg/identity.hpp"
#include "opalg/io.hpp"

namespace opalg {

using nlohmann::json;

namespace {

[[noreturn]] void bad_fixture(const std::string& what) { throw ParseError("fixture: " + what); }

AmbientSpec parse_ambient(const json& j) {
  AmbientSpec a;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "matrix") {
    a.kind = AmbientSpec::Kind::matrix;
    a.rows = a.cols = j.at("n").get<std::size_t>();
  } else if (kind == "hadamard") {
    a.kind = AmbientSpec::Kind::hadamard;
    a.rows = j.at("rows").get<std::size_t>();
    a.cols = j.at("cols").get<std::size_t>();
  } else {
    bad_fixture("unknown ambient kind '" + kind + "'");
  }
  return a;
}

std::vector<Expression> parse_expressions(const json& j) {
  std::vector<Expression> out;
  for (const auto& e : j) out.push_back(Expression::parse(e.get<std::string>()));
  return out;
}

FixtureRow parse_row(const json& j) {
  FixtureRow row;
  row.check = j.at("check").get<std::string>();
  if (j.contains("on")) row.on = j.at("on").get<std::string>();
  if (j.contains("lin"))
    for (const auto& c : j.at("lin")) row.lin.push_back(parse_linear_constraint(c.get<std::string>()));
  if (j.contains("expect")) {
    row.expect = j.at("expect").get<std::string>();
    if (row.expect != "pass" && row.expect != "fail") bad_fixture("expect must be pass or fail");
  }
  return row;
}

std::vector<Scalar> evaluate_all(const std::vector<Expression>& exprs, const Bindings& point) {
  std::vector<Scalar> out;
  for (const auto& e : exprs) out.push_back(e.evaluate(point));
  return out;
}

Bindings bind(const std::vector<ParameterGrid>& params, std::span<const Scalar> values) {
  Bindings b;
  for (std::size_t i = 0; i < params.size(); ++i) b[params[i].name] = values[i];
  return b;
}

struct ParsedCheck {
  std::string family;
  detail::CallSyntax call;
};

ParsedCheck parse_check(const std::string& check) {
  const auto colon = check.find(':');
  if (colon == std::string::npos) bad_fixture("check '" + check + "' has no family prefix");
  return {check.substr(0, colon), detail::split_call(std::string_view(check).substr(colon + 1))};
}

std::vector<Scalar> call_args(const detail::CallSyntax& call, const Bindings& point) {
  std::vector<Scalar> out;
  for (const auto& a : call.args) out.push_back(Expression::parse(a).evaluate(point));
  return out;
}

bool is_linear_name(const std::string& name) {
  try {
    parse_linear_constraint(name);
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

const Algebra& algebra_named(const FixtureInstance& inst, const std::string& name) {
  if (auto it = inst.algebras.find(name); it != inst.algebras.end()) return it->second;
  if (auto it = inst.algebra_errors.find(name); it != inst.algebra_errors.end()) {
    throw Error("algebra '" + name + "' unavailable: " + it->second);
  }
  throw Error("unknown algebra '" + name + "'");
}

const LinearOperator& operator_of(const FixtureInstance& inst) {
  if (!inst.op) throw Error("operator unavailable: " + inst.op_error);
  return *inst.op;
}

std::string verdict_word(const Verdict& v) { return v.pass ? "pass" : "fail"; }

}  // namespace

Algebra AmbientSpec::build() const {
  return kind == Kind::matrix ? matrix_algebra(rows) : hadamard_algebra(rows, cols);
}

FixtureBundle parse_fixture(const json& j) {
  try {
    FixtureBundle f;
    f.name = j.at("fixture").get<std::string>();
    f.description = j.value("description", "");
    f.notes = j.value("notes", "");
    f.ambient = parse_ambient(j.at("ambient"));
    if (j.contains("operator_ambient")) f.operator_ambient = parse_ambient(j.at("operator_ambient"));
    if (j.contains("labels")) f.labels = j.at("labels").get<std::vector<std::string>>();
    for (const auto& b : j.at("basis")) f.basis.push_back(parse_expressions(b));
    if (j.contains("parameters")) {
      for (const auto& p : j.at("parameters")) {
        ParameterGrid g;
        g.name = p.at("name").get<std::string>();
        g.degree = p.at("degree").get<unsigned>();
        for (const auto& v : p.at("grid")) g.values.push_back(io::scalar_from_json(v));
        f.parameters.push_back(std::move(g));
      }
    }
    if (j.contains("guards")) f.guards = parse_expressions(j.at("guards"));
    if (j.contains("sample"))
      for (const auto& [k, v] : j.at("sample").items()) f.sample[k] = io::scalar_from_json(v);
    for (const auto& p : f.parameters)
      if (!f.sample.contains(p.name)) bad_fixture(f.name + ": sample has no value for '" + p.name + "'");
    for (const auto& r : j.at("u")) f.u.push_back(parse_expressions(r));
    if (j.contains("derived")) {
      for (const auto& d : j.at("derived")) {
        DerivedSpec spec;
        spec.name = d.at("name").get<std::string>();
        spec.from = d.at("from").get<std::string>();
        spec.construction = parse_construction(d.at("construction").get<std::string>());
        if (d.contains("params") && d.at("params").contains("a"))
          spec.params.push_back(Expression::parse(d.at("params").at("a").get<std::string>()));
        f.derived.push_back(std::move(spec));
      }
    }
    for (const auto& r : j.at("rows")) f.rows.push_back(parse_row(r));
    const json& nc = j.at("negative_control");
    const auto kind = nc.at("kind").get<std::string>();
    if (kind == "shift_u") {
      f.negative_control.kind = NegativeControl::Kind::shift_u;
      f.negative_control.by = nc.at("by").get<std::size_t>();
    } else if (kind == "shift_operator") {
      f.negative_control.kind = NegativeControl::Kind::shift_operator;
    } else {
      bad_fixture("unknown negative control '" + kind + "'");
    }
    f.negative_control.target = parse_row(nc.at("target"));
    return f;
  } catch (const json::exception& e) {
    bad_fixture(e.what());
  }
}

std::vector<std::string> list_fixtures() {
  std::vector<std::string> names;
  for (const auto& s : fixture_data::sources()) names.emplace_back(s.name);
  return names;
}

const std::string& fixture_source(std::string_view name) {
  for (const auto& s : fixture_data::sources())
    if (s.name == name) return s.json;
  throw UnknownFixtureError("unknown fixture '" + std::string(name) + "'");
}

FixtureBundle load_fixture(std::string_view name) { return parse_fixture(json::parse(fixture_source(name))); }

FixtureInstance instantiate(const FixtureBundle& f, const Bindings& point, Perturbation perturb) {
  for (const auto& g : f.guards) {
    if (sgn(g.evaluate(point)) == 0) throw Error(f.name + ": guard '" + g.text() + "' vanishes at this point");
  }
  Algebra ambient = f.ambient.build();
  Algebra op_ambient = f.operator_ambient ? f.operator_ambient->build() : ambient;

  std::vector<Element> basis;
  for (const auto& b : f.basis) basis.emplace_back(evaluate_all(b, point));
  Subalgebra sub = induce_subalgebra(ambient, basis, f.labels);
  Embedding u_emb = f.operator_ambient ? Embedding::of_span(op_ambient, basis) : sub.embedding;

  std::vector<Scalar> ucoords;
  for (const auto& row : f.u)
    for (const auto& e : row) ucoords.push_back(e.evaluate(point));
  if (ucoords.size() != op_ambient.dim()) throw DimensionError(f.name + ": u does not fit the operator ambient");
  if (perturb.kind == Perturbation::Kind::shift_u) {
    if (perturb.by >= ucoords.size()) throw DimensionError(f.name + ": shift_u index out of range");
    ucoords[perturb.by] += 1;
  }

  FixtureInstance inst{ambient, op_ambient, sub, u_emb, Element(std::move(ucoords)), std::nullopt, {}, {}, {}};
  try {
    LinearOperator r = left_multiplication_operator(inst.u_embedding, inst.u);
    if (perturb.kind == Perturbation::Kind::shift_operator) r = r + LinearOperator::identity(r.dim());
    inst.op = std::move(r);
  } catch (const Error& e) {
    inst.op_error = e.what();
  }

  inst.algebras.emplace("A", inst.algebra.algebra);
  for (const auto& d : f.derived) {
    try {
      const Algebra& from = algebra_named(inst, d.from);
      ConstructionSpec spec{d.construction, evaluate_all(d.params, point)};
      Algebra out = requires_operator(d.construction) ? derive(from, operator_of(inst), spec) : derive(from, spec);
      inst.algebras.emplace(d.name, std::move(out));
    } catch (const Error& e) {
      inst.algebra_errors[d.name] = e.what();
    }
  }
  return inst;
}

Verdict evaluate_row(const FixtureInstance& inst, const FixtureRow& row, const Bindings& point) {
  const ParsedCheck pc = parse_check(row.check);
  const auto& name = pc.call.name;
  if (pc.family == "identity") {
    if (!pc.call.args.empty()) throw Error("identity checks take no arguments");
    return check_identity(algebra_named(inst, row.on), parse_identity_name(name));
  }
  if (pc.family == "operator") {
    OperatorProperty p{parse_operator_kind(name), call_args(pc.call, point)};
    return check_operator_property(algebra_named(inst, row.on), operator_of(inst), p);
  }
  if (pc.family == "element") {
    if (is_linear_name(name)) {
      if (!pc.call.args.empty()) throw Error("linear constraints take no arguments");
      return check_linear(inst.u_embedding, inst.u, parse_linear_constraint(name));
    }
    const QuadraticConstraint q{parse_quadratic_kind(name), call_args(pc.call, point), std::nullopt};
    return check_quadratic(inst.operator_ambient, inst.u, q);
  }
  if (pc.family == "search") {
    const QuadraticConstraint q{parse_quadratic_kind(name), call_args(pc.call, point), std::nullopt};
    const AffineSpace space = solve_linear(inst.u_embedding, row.lin);
    const auto params = space.parameters_of(inst.u);
    if (!params) return Verdict::failed("u does not satisfy the linear constraints");
    const SearchResult found = find_special(inst.u_embedding, row.lin, q, GridStrategy{{*params}});
    if (std::find(found.elements.begin(), found.elements.end(), inst.u) == found.elements.end()) {
      return Verdict::failed("search at the parameters of u did not return u");
    }
    return Verdict::ok();
  }
  throw Error("unknown check family '" + pc.family + "'");
}

bool FixtureReport::rows_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const RowResult& r) { return r.matches; });
}

ControlResult run_negative_control(const FixtureBundle& f) {
  const NegativeControl& nc = f.negative_control;
  ControlResult out;
  auto eval = [&](Perturbation p) {
    try {
      const FixtureInstance inst = instantiate(f, f.sample, p);
      return verdict_word(evaluate_row(inst, nc.target, f.sample));
    } catch (const Error& e) {
      out.detail = e.what();
      return std::string("error");
    }
  };
  out.base = eval({});
  const Perturbation p{nc.kind == NegativeControl::Kind::shift_u ? Perturbation::Kind::shift_u
                                                                  : Perturbation::Kind::shift_operator,
                       nc.by};
  out.perturbed = eval(p);
  out.flipped = out.base != "error" && out.perturbed != "error" && out.base != out.perturbed;
  return out;
}

FixtureReport verify_fixture(const FixtureBundle& f) {
  FixtureReport report;
  report.fixture = f.name;
  for (const auto& p : f.parameters) report.grid_points *= p.values.size();

  // Instances are shared by all rows of a grid point.
  std::map<std::vector<Scalar>, FixtureInstance> cache;
  auto instance_at = [&](std::span<const Scalar> values) -> const FixtureInstance& {
    std::vector<Scalar> key(values.begin(), values.end());
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, instantiate(f, bind(f.parameters, values))).first;
    return it->second;
  };

  for (const auto& row : f.rows) {
    RowResult r;
    r.row = row;
    try {
      r.verdict = certify_parametric(f.parameters, [&](std::span<const Scalar> values) {
        return evaluate_row(instance_at(values), row, bind(f.parameters, values));
      });
      r.actual = verdict_word(r.verdict);
    } catch (const Error& e) {
      r.actual = "error";
      r.error = e.what();
    }
    r.matches = r.actual == row.expect;
    report.rows.push_back(std::move(r));
  }
  report.control = run_negative_control(f);
  return report;
}

FixtureReport verify_fixture(std::string_view name) { return verify_fixture(load_fixture(name)); }

}  // namespace opalg
