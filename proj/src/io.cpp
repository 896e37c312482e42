#include "opalg/io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

namespace opalg::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw ParseError("malformed JSON: " + what); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) malformed(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::size_t index_from_json(const json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    malformed("expected a non-negative integer, got " + j.dump());
  }
  return j.get<std::size_t>();
}

}  // namespace

Scalar scalar_from_json(const json& j) {
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return Scalar(mpz_class(j.dump(), 10));
  malformed("expected a rational string or integer, got " + j.dump());
}

json to_json(const Scalar& s) { return to_string(s); }

json to_json(const Element& e) {
  json out = json::array();
  for (const auto& c : e.coords()) out.push_back(to_json(c));
  return out;
}

Element element_from_json(const json& j) {
  if (j.is_object()) return element_from_json(field(j, "element"));
  if (!j.is_array()) malformed("element must be an array");
  std::vector<Scalar> coords;
  std::optional<std::size_t> row_length;
  for (const auto& x : j) {
    if (x.is_array()) {
      if (!row_length && !coords.empty()) malformed("element mixes rows and scalars");
      if (row_length && *row_length != x.size()) malformed("element rows have different lengths");
      row_length = x.size();
      for (const auto& y : x) coords.push_back(scalar_from_json(y));
    } else {
      if (row_length) malformed("element mixes rows and scalars");
      coords.push_back(scalar_from_json(x));
    }
  }
  if (coords.empty()) malformed("element is empty");
  return Element(std::move(coords));
}

json to_json(const Algebra& a) {
  json out;
  out["dim"] = a.dim();
  out["labels"] = a.labels();
  json sc = json::array();
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(a.sc(i, j, k)) != 0) sc.push_back(json::array({i, j, k, to_string(a.sc(i, j, k))}));
  out["sc"] = std::move(sc);
  if (!a.metadata().empty()) out["metadata"] = a.metadata();
  return out;
}

Algebra algebra_from_json(const json& j) {
  const std::size_t dim = index_from_json(field(j, "dim"));
  std::vector<ScEntry> entries;
  for (const auto& e : field(j, "sc")) {
    if (!e.is_array() || e.size() != 4) malformed("sc entries must be [i, j, k, value]");
    entries.push_back(
        ScEntry{index_from_json(e[0]), index_from_json(e[1]), index_from_json(e[2]), scalar_from_json(e[3])});
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  Algebra a = make_algebra(dim, entries, std::move(labels));
  if (j.contains("metadata")) a = a.with_metadata(j.at("metadata").get<std::map<std::string, std::string>>());
  return a;
}

json to_json(const LinearOperator& r) {
  json cols = json::array();
  for (std::size_t c = 0; c < r.dim(); ++c) cols.push_back(to_json(r.image(c)));
  return json{{"dim", r.dim()}, {"matrix", std::move(cols)}};
}

LinearOperator operator_from_json(const json& j) {
  const std::size_t dim = index_from_json(field(j, "dim"));
  const json& cols = field(j, "matrix");
  if (!cols.is_array() || cols.size() != dim) malformed("operator matrix must list " + std::to_string(dim) + " columns");
  Matrix m(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    if (!cols[c].is_array() || cols[c].size() != dim) malformed("operator column has wrong length");
    for (std::size_t r = 0; r < dim; ++r) m(r, c) = scalar_from_json(cols[c][r]);
  }
  return LinearOperator(std::move(m));
}

json to_json(const Embedding& emb) {
  json basis = json::array();
  for (const auto& b : emb.basis()) basis.push_back(to_json(b));
  return json{{"ambient", to_json(emb.ambient())}, {"basis", std::move(basis)}};
}

Embedding embedding_from_json(const json& j, const std::filesystem::path& base_dir) {
  const json& amb = field(j, "ambient");
  Algebra ambient = [&] {
    if (amb.is_string()) {
      std::filesystem::path p = amb.get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      return algebra_from_json(read_json_file(p));
    }
    return algebra_from_json(amb);
  }();
  std::vector<Element> basis;
  for (const auto& b : field(j, "basis")) basis.push_back(element_from_json(b));
  return Embedding::of_span(std::move(ambient), std::move(basis));
}

json to_json(const Verdict& v) {
  json out{{"pass", v.pass}};
  if (!v.detail.empty()) out["detail"] = v.detail;
  if (v.witness) {
    const Witness& w = *v.witness;
    json wj;
    if (!w.indices.empty()) wj["indices"] = w.indices;
    if (!w.arguments.empty()) {
      json args = json::array();
      for (const auto& a : w.arguments) args.push_back(to_json(a));
      wj["arguments"] = std::move(args);
    }
    if (!w.parameters.empty()) {
      json params = json::array();
      for (const auto& p : w.parameters) params.push_back(to_json(p));
      wj["parameters"] = std::move(params);
    }
    if (w.lhs.dim() > 0) wj["lhs"] = to_json(w.lhs);
    if (w.rhs.dim() > 0) wj["rhs"] = to_json(w.rhs);
    out["witness"] = std::move(wj);
  }
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw Error("error writing " + path.string());
}

}  // namespace opalg::io
