#include "opalg/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <sstream>

#include "detail.hpp"
#include "opalg/constructions.hpp"
#include "opalg/fixtures.hpp"
#include "opalg/identity.hpp"
#include "opalg/io.hpp"
#include "opalg/operator.hpp"
#include "opalg/search.hpp"

namespace opalg::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

std::vector<std::string> split_list(const std::string& text) {
  // Top-level comma split, so "rota_baxter(1,2),derivation" has two items.
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.emplace_back(detail::trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!detail::trim(cur).empty()) out.emplace_back(detail::trim(cur));
  return out;
}

std::map<std::string, std::string> parse_assignments(const std::string& text) {
  std::map<std::string, std::string> out;
  for (const auto& item : split_list(text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + item + "'");
    out[std::string(detail::trim(item.substr(0, eq)))] = std::string(detail::trim(item.substr(eq + 1)));
  }
  return out;
}

Embedding load_embedding(const std::string& path, const std::string& ambient_path) {
  json j = io::read_json_file(path);
  if (!ambient_path.empty()) j["ambient"] = io::read_json_file(ambient_path);
  return io::embedding_from_json(j, fs::path(path).parent_path());
}

/// Operator from --operator, or from --from-u acting on --embedding.
struct OperatorSource {
  std::string operator_path;
  std::string u_path;
  std::string embedding_path;
  std::string ambient_path;

  bool given() const { return !operator_path.empty() || !u_path.empty(); }

  LinearOperator load() const {
    if (!operator_path.empty()) return io::operator_from_json(io::read_json_file(operator_path));
    if (embedding_path.empty()) throw Error("--from-u needs --embedding");
    const Embedding emb = load_embedding(embedding_path, ambient_path);
    return left_multiplication_operator(emb, io::element_from_json(io::read_json_file(u_path)));
  }

  void add_options(CLI::App& app) {
    auto* op = app.add_option("--operator", operator_path, "Operator file (columns are images of basis elements)");
    auto* u = app.add_option("--from-u", u_path, "Ambient element u; the operator is R(x) = u x");
    op->excludes(u);
    app.add_option("--embedding", embedding_path, "Embedding file used with --from-u");
    app.add_option("--ambient", ambient_path, "Ambient algebra file overriding the embedding's ambient");
  }
};

Algebra load_algebra(const std::string& path, const OperatorSource& src) {
  if (!path.empty()) return io::algebra_from_json(io::read_json_file(path));
  if (!src.embedding_path.empty()) {
    const Embedding emb = load_embedding(src.embedding_path, src.ambient_path);
    return induce_subalgebra(emb.ambient(), emb.basis()).algebra;
  }
  throw Error("--algebra is required (or --embedding to induce the subalgebra)");
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

struct PropsCommand {
  std::string algebra_path;
  OperatorSource src;
  std::string properties;
  bool as_json = false;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("props", "Check operator properties on basis pairs");
    cmd->add_option("--algebra", algebra_path, "Algebra file");
    src.add_options(*cmd);
    cmd->add_option("--property", properties, "Comma-separated properties, e.g. endomorphism,rota_baxter(1)")
        ->required();
    cmd->add_flag("--json", as_json, "Machine-readable output");
  }

  int run(std::ostream& out) const {
    if (!src.given()) throw Error("props needs --operator or --from-u");
    const Algebra a = load_algebra(algebra_path, src);
    const LinearOperator r = make_operator(a, src.load().matrix());
    bool all = true;
    json results = json::array();
    for (const auto& text : split_list(properties)) {
      const OperatorProperty p = parse_operator_property(text);
      const Verdict v = check_operator_property(a, r, p);
      all = all && v.pass;
      if (as_json) {
        results.push_back({{"property", to_string(p)}, {"verdict", io::to_json(v)}});
      } else {
        out << to_string(p) << ": " << describe(v) << "\n";
      }
    }
    if (as_json) print_json(out, {{"pass", all}, {"results", results}});
    return all ? kPass : kFail;
  }
};

struct CheckCommand {
  std::string algebra_path;
  std::string identities;
  std::string random;
  std::string engine = "parallel";
  bool as_json = false;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("check", "Verify polynomial identities exactly");
    cmd->add_option("--algebra", algebra_path, "Algebra file")->required();
    cmd->add_option("--identity", identities, "Comma-separated identity names, or 'all'")->required();
    cmd->add_option("--random", random, "Sampled check instead: trials=N,seed=S");
    cmd->add_option("--engine", engine, "parallel or reference")
        ->check(CLI::IsMember({"parallel", "reference"}));
    cmd->add_flag("--json", as_json, "Machine-readable output");
  }

  int run(std::ostream& out) const {
    const Algebra a = io::algebra_from_json(io::read_json_file(algebra_path));
    std::vector<IdentityName> ids;
    if (identities == "all") {
      ids = all_identities();
    } else {
      for (const auto& name : split_list(identities)) ids.push_back(parse_identity_name(name));
    }
    unsigned trials = 0;
    std::uint64_t seed = 0;
    if (!random.empty()) {
      auto kv = parse_assignments(random);
      trials = kv.contains("trials") ? static_cast<unsigned>(std::stoul(kv["trials"])) : 100;
      seed = kv.contains("seed") ? std::stoull(kv["seed"]) : 0;
      if (trials == 0) throw Error("trials must be positive");
    }
    bool all = true;
    json results = json::array();
    for (auto id : ids) {
      const Verdict v = random.empty()
                            ? check_identity(a, id, engine == "reference" ? Engine::reference : Engine::parallel)
                            : check_identity_random(a, id, trials, seed);
      all = all && v.pass;
      if (as_json) {
        results.push_back({{"identity", std::string(to_string(id))}, {"verdict", io::to_json(v)}});
      } else {
        out << to_string(id) << ": " << describe(v) << "\n";
      }
    }
    if (as_json) {
      json doc{{"pass", all}, {"mode", random.empty() ? "exact" : "random"}, {"results", results}};
      if (!random.empty()) {
        doc["trials"] = trials;
        doc["seed"] = seed;
      }
      print_json(out, doc);
    }
    return all ? kPass : kFail;
  }
};

struct DeriveCommand {
  std::string algebra_path;
  OperatorSource src;
  std::string construction;
  std::vector<std::string> params;
  std::string out_path;
  bool as_json = false;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("derive", "Build a derived product as a new algebra file");
    cmd->add_option("--algebra", algebra_path, "Source algebra file");
    src.add_options(*cmd);
    cmd->add_option("--construction", construction, "Construction name")->required();
    cmd->add_option("--param", params, "Construction parameter, e.g. a=1/2");
    cmd->add_option("--out", out_path, "Output algebra file (default: stdout)");
    cmd->add_flag("--json", as_json, "Print the derived algebra as JSON");
  }

  int run(std::ostream& out) const {
    const Algebra a = load_algebra(algebra_path, src);
    ConstructionSpec spec{parse_construction(construction), {}};
    for (const auto& p : params) {
      auto kv = parse_assignments(p);
      if (!kv.contains("a") || kv.size() != 1) throw Error("unknown construction parameter '" + p + "'");
      spec.params.push_back(parse_scalar(kv["a"]));
    }
    const Algebra d = src.given() ? derive(a, make_operator(a, src.load().matrix()), spec) : derive(a, spec);
    const json doc = io::to_json(d);
    if (!out_path.empty()) {
      io::write_json_file(out_path, doc);
      if (!as_json) out << "wrote " << out_path << " (" << to_string(spec.name) << ", dim " << d.dim() << ")\n";
    }
    if (out_path.empty() || as_json) print_json(out, doc);
    return kPass;
  }
};

struct SearchCommand {
  std::string embedding_path;
  std::string ambient_path;
  std::string lin;
  std::string quad;
  std::string grid_path;
  std::string univariate;
  std::string unit_path;
  std::string element_path;
  bool as_json = false;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("search-element", "Solve for distinguished elements u");
    cmd->add_option("--embedding", embedding_path, "Embedding file of the subalgebra")->required();
    cmd->add_option("--ambient", ambient_path, "Ambient algebra file overriding the embedding's ambient");
    cmd->add_option("--lin", lin, "Comma-separated linear constraints");
    cmd->add_option("--quad", quad, "Quadratic constraint, e.g. idempotent or rb_weighted(1,2)");
    auto* grid = cmd->add_option("--grid", grid_path, "JSON file {\"points\": [[t1, t2, ...], ...]}");
    auto* uni = cmd->add_option("--univariate", univariate, "free=i,pin=v1;v2;... (pinned in parameter order)");
    auto* elem = cmd->add_option("--element", element_path, "Only verify this ambient element");
    grid->excludes(uni);
    elem->excludes(grid)->excludes(uni);
    cmd->add_option("--unit", unit_path, "Unit element for rb_weighted (default: ambient identity)");
    cmd->add_flag("--json", as_json, "Machine-readable output");
  }

  int run(std::ostream& out) const {
    const Embedding emb = load_embedding(embedding_path, ambient_path);
    std::vector<LinearConstraint> constraints;
    for (const auto& c : split_list(lin)) constraints.push_back(parse_linear_constraint(c));
    std::optional<QuadraticConstraint> q;
    if (!quad.empty()) {
      q = parse_quadratic(quad);
      if (!unit_path.empty()) q->unit = io::element_from_json(io::read_json_file(unit_path));
    }

    if (!element_path.empty()) {
      const Element u = io::element_from_json(io::read_json_file(element_path));
      const ElementReport rep = verify_element(emb, u, constraints, q);
      json items = json::array();
      for (const auto& c : rep.checks) {
        if (as_json) {
          items.push_back({{"constraint", c.constraint}, {"verdict", io::to_json(c.verdict)}});
        } else {
          out << c.constraint << ": " << describe(c.verdict) << "\n";
        }
      }
      if (as_json) print_json(out, {{"pass", rep.pass()}, {"checks", items}});
      return rep.pass() ? kPass : kFail;
    }

    const AffineSpace space = solve_linear(emb, constraints);
    json doc;
    if (space.empty()) {
      doc["solution_space"] = nullptr;
      if (!as_json) out << "linear constraints: no solution\n";
    } else {
      json dirs = json::array();
      for (const auto& d : space.directions) dirs.push_back(io::to_json(d));
      doc["solution_space"] = {
          {"offset", io::to_json(*space.offset)}, {"directions", dirs}, {"free_coordinates", space.free_coordinates}};
      if (!as_json) {
        out << "linear constraints: affine space of dimension " << space.dimension() << "\n";
        out << "  offset " << to_string(*space.offset) << "\n";
        for (std::size_t i = 0; i < space.dimension(); ++i)
          out << "  t" << i << " (coordinate " << space.free_coordinates[i] << ") " << to_string(space.directions[i])
              << "\n";
      }
    }
    if (!q) {
      if (as_json) print_json(out, doc);
      return space.empty() ? kFail : kPass;
    }

    SearchStrategy strategy;
    if (!grid_path.empty()) {
      const json g = io::read_json_file(grid_path);
      GridStrategy gs;
      for (const auto& p : g.at("points")) {
        std::vector<Scalar> point;
        for (const auto& v : p) point.push_back(io::scalar_from_json(v));
        gs.points.push_back(std::move(point));
      }
      strategy = std::move(gs);
    } else if (!univariate.empty()) {
      auto kv = parse_assignments(univariate);
      UnivariateStrategy us;
      us.free_parameter = kv.contains("free") ? std::stoul(kv["free"]) : 0;
      if (kv.contains("pin")) {
        std::stringstream ss(kv["pin"]);
        std::string item;
        while (std::getline(ss, item, ';'))
          if (!detail::trim(item).empty()) us.pinned.push_back(parse_scalar(item));
      }
      strategy = std::move(us);
    } else {
      throw Error("search-element needs --grid, --univariate or --element");
    }

    const SearchResult res = find_special(emb, constraints, *q, strategy);
    json found = json::array();
    for (const auto& e : res.elements) found.push_back(io::to_json(e));
    doc["found"] = found;
    doc["irrational_solutions"] = res.irrational_solutions;
    doc["entire_line"] = res.entire_line;
    if (as_json) {
      print_json(out, doc);
    } else {
      out << "quadratic constraint " << to_string(*q) << ": " << res.elements.size() << " element(s)\n";
      for (const auto& e : res.elements) out << "  " << to_string(e) << "\n";
      if (res.entire_line) out << "  every point of the line is a solution\n";
      if (res.irrational_solutions) out << "  solutions exist outside Q (irrational roots)\n";
    }
    return res.elements.empty() && !res.irrational_solutions ? kFail : kPass;
  }
};

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

json report_json(const FixtureReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j{{"check", row.row.check}, {"on", row.row.on}, {"expect", row.row.expect}, {"actual", row.actual},
           {"matches", row.matches}};
    if (!row.row.lin.empty()) {
      json lin = json::array();
      for (auto c : row.row.lin) lin.push_back(std::string(to_string(c)));
      j["lin"] = lin;
    }
    if (row.actual == "error") {
      j["error"] = row.error;
    } else if (!row.verdict.pass) {
      j["verdict"] = io::to_json(row.verdict);
    }
    rows.push_back(std::move(j));
  }
  json control{{"base", r.control.base}, {"perturbed", r.control.perturbed}, {"flipped", r.control.flipped}};
  if (!r.control.detail.empty()) control["detail"] = r.control.detail;
  return {{"fixture", r.fixture}, {"grid_points", r.grid_points}, {"rows", rows}, {"negative_control", control},
          {"pass", r.pass()}};
}

void print_report(std::ostream& out, const FixtureBundle& f, const FixtureReport& r) {
  out << "fixture " << r.fixture << " (" << r.grid_points << " grid point" << (r.grid_points == 1 ? "" : "s")
      << ")\n";
  for (const auto& row : r.rows) {
    std::string check = row.row.check;
    if (!row.row.lin.empty()) {
      check += " [";
      for (std::size_t i = 0; i < row.row.lin.size(); ++i) check += (i ? "," : "") + std::string(to_string(row.row.lin[i]));
      check += "]";
    }
    out << "  " << pad(check, 48) << pad("on " + row.row.on, 12) << "expect " << pad(row.row.expect, 5) << "actual "
        << pad(row.actual, 6) << (row.matches ? "ok" : "MISMATCH") << "\n";
    if (!row.matches) {
      out << "      " << (row.actual == "error" ? row.error : describe(row.verdict)) << "\n";
    }
  }
  const auto& nc = f.negative_control;
  const std::string kind = nc.kind == NegativeControl::Kind::shift_u ? "shift_u(" + std::to_string(nc.by) + ")"
                                                                      : std::string("shift_operator");
  out << "  negative control " << kind << " on " << nc.target.check << ": " << r.control.base << " -> "
      << r.control.perturbed << "  " << (r.control.flipped ? "flipped" : "NOT FLIPPED") << "\n";
  if (!r.control.detail.empty()) out << "      " << r.control.detail << "\n";
  out << "  result: " << (r.pass() ? "pass" : "fail") << "\n";
}

struct VerifyFixtureCommand {
  std::vector<std::string> names;
  bool as_json = false;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("verify-fixture", "Re-derive every expected verdict of a fixture");
    cmd->add_option("names", names, "Fixture names, or 'all'")->required();
    cmd->add_flag("--json", as_json, "Machine-readable output");
  }

  int run(std::ostream& out) const {
    std::vector<std::string> todo;
    for (const auto& n : names) {
      if (n == "all") {
        for (const auto& f : list_fixtures()) todo.push_back(f);
      } else {
        todo.push_back(n);
      }
    }
    bool all = true;
    json reports = json::array();
    for (const auto& name : todo) {
      const FixtureBundle f = load_fixture(name);
      const FixtureReport r = verify_fixture(f);
      all = all && r.pass();
      if (as_json) {
        reports.push_back(report_json(r));
      } else {
        print_report(out, f, r);
      }
    }
    if (as_json) print_json(out, todo.size() == 1 ? reports[0] : json{{"pass", all}, {"fixtures", reports}});
    return all ? kPass : kFail;
  }
};

struct ListFixturesCommand {
  bool as_json = false;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("list-fixtures", "List the fixture catalog");
    cmd->add_flag("--json", as_json, "Machine-readable output");
  }

  int run(std::ostream& out) const {
    if (as_json) {
      json items = json::array();
      for (const auto& name : list_fixtures())
        items.push_back({{"name", name}, {"description", load_fixture(name).description}});
      print_json(out, items);
    } else {
      for (const auto& name : list_fixtures()) out << pad(name, 5) << load_fixture(name).description << "\n";
    }
    return kPass;
  }
};

struct ExportFixtureCommand {
  std::string name;
  std::string point;
  std::string dir = ".";

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("export-fixture", "Write a fixture instance as algebra/operator/element files");
    cmd->add_option("name", name, "Fixture name")->required();
    cmd->add_option("--point", point, "Parameter values, e.g. b=2 (default: the sample point)");
    cmd->add_option("--dir", dir, "Output directory");
  }

  int run(std::ostream& out) const {
    const FixtureBundle f = load_fixture(name);
    Bindings at = f.sample;
    if (!point.empty())
      for (const auto& [k, v] : parse_assignments(point)) at[k] = parse_scalar(v);
    const FixtureInstance inst = instantiate(f, at);
    fs::create_directories(dir);
    auto write = [&](const std::string& file, const json& j) {
      io::write_json_file(fs::path(dir) / file, j);
      out << "wrote " << (fs::path(dir) / file).string() << "\n";
    };
    write("ambient.json", io::to_json(inst.ambient));
    json emb{{"ambient", "ambient.json"}, {"basis", json::array()}};
    for (const auto& b : inst.algebra.embedding.basis()) emb["basis"].push_back(io::to_json(b));
    write("embedding.json", emb);
    if (f.operator_ambient) {
      write("operator_ambient.json", io::to_json(inst.operator_ambient));
      json uemb{{"ambient", "operator_ambient.json"}, {"basis", emb["basis"]}};
      write("u_embedding.json", uemb);
    }
    write("u.json", io::to_json(inst.u));
    for (const auto& [n, a] : inst.algebras) write(n == "A" ? "algebra.json" : n + ".json", io::to_json(a));
    if (inst.op) write("operator.json", io::to_json(*inst.op));
    return kPass;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact construction and verification of algebras with linear operators", "opalg"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  PropsCommand props;
  CheckCommand check;
  DeriveCommand der;
  SearchCommand search;
  VerifyFixtureCommand verify;
  ListFixturesCommand list;
  ExportFixtureCommand exp;
  props.attach(app);
  check.attach(app);
  der.attach(app);
  search.attach(app);
  verify.attach(app);
  list.attach(app);
  exp.attach(app);

  std::vector<std::string> argv_store{"opalg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kError;
  }

  try {
    if (app.got_subcommand("props")) return props.run(out);
    if (app.got_subcommand("check")) return check.run(out);
    if (app.got_subcommand("derive")) return der.run(out);
    if (app.got_subcommand("search-element")) return search.run(out);
    if (app.got_subcommand("verify-fixture")) return verify.run(out);
    if (app.got_subcommand("list-fixtures")) return list.run(out);
    if (app.got_subcommand("export-fixture")) return exp.run(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kError;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid number: " << e.what() << "\n";
    return kError;
  } catch (const std::out_of_range& e) {
    err << "error: value out of range: " << e.what() << "\n";
    return kError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace opalg::cli
