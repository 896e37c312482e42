#pragma once

#include <filesystem>

#include <json.hpp>

#include "opalg/algebra.hpp"
#include "opalg/operator.hpp"
#include "opalg/verdict.hpp"

namespace opalg::io {

using nlohmann::json;

// File formats (UTF-8 JSON, scalars as canonical strings "p/q" or "p";
// integer JSON numbers are accepted on input, floats never):
//
//   algebra   {"dim": n, "labels": [...], "sc": [[i, j, k, "p/q"], ...]}
//             0-based indices, omitted triples are zero.
//   operator  {"dim": n, "matrix": [[...], ...]}
//             column-major: matrix[j] lists the coordinates of R(e_j).
//   element   ["p/q", ...]  or  [["p/q", ...], ...]  (matrix rows, read
//             row-major) or {"element": <either form>}
//   embedding {"ambient": <algebra object or path>, "basis": [[...], ...]}
//             each basis entry is an element in either form; a relative
//             ambient path is resolved against the embedding file.

Scalar scalar_from_json(const json& j);
json to_json(const Scalar& s);

json to_json(const Element& e);
Element element_from_json(const json& j);

json to_json(const Algebra& a);
Algebra algebra_from_json(const json& j);

json to_json(const LinearOperator& r);
LinearOperator operator_from_json(const json& j);

json to_json(const Embedding& emb);
Embedding embedding_from_json(const json& j, const std::filesystem::path& base_dir = {});

json to_json(const Verdict& v);

/// Errors (opalg::Error) on unreadable files or malformed JSON.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace opalg::io
