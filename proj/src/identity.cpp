#include "opalg/identity.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <stdexcept>

#include "opalg/kernels.hpp"

namespace opalg {

namespace {

struct TermSpec {
  long coeff;
  std::string_view word;  // single-letter variables, explicit parentheses
};

struct IdentitySpec {
  IdentityName name;
  std::string_view label;
  std::string_view variables;
  std::vector<TermSpec> lhs;
  std::vector<TermSpec> rhs;
};

const std::vector<IdentitySpec>& specs() {
  static const std::vector<IdentitySpec> table{
      {IdentityName::antisymmetry, "antisymmetry", "xy", {{1, "xy"}}, {{-1, "yx"}}},
      {IdentityName::jacobi, "jacobi", "xyz", {{1, "x(yz)"}, {1, "z(xy)"}, {1, "y(zx)"}}, {}},
      {IdentityName::left_leibniz, "left_leibniz", "xyz", {{1, "x(yz)"}}, {{1, "(xy)z"}, {1, "y(xz)"}}},
      {IdentityName::left_prelie, "left_prelie", "xyz", {{1, "(xy)z"}, {-1, "x(yz)"}}, {{1, "(yx)z"}, {-1, "y(xz)"}}},
      {IdentityName::flexible, "flexible", "xy", {{1, "(xy)x"}}, {{1, "x(yx)"}}},
      {IdentityName::jordan_flex, "jordan_flex", "xy", {{1, "(xy)x"}}, {{1, "x(yx)"}}},
      {IdentityName::jordan_main, "jordan_main", "xy", {{1, "((xx)y)x"}}, {{1, "(xx)(yx)"}}},
      {IdentityName::novikov_right_comm, "novikov_right_comm", "xyz", {{1, "(xy)z"}}, {{1, "(xz)y"}}},
      {IdentityName::associativity, "associativity", "xyz", {{1, "(xy)z"}}, {{1, "x(yz)"}}},
      {IdentityName::commutativity, "commutativity", "xy", {{1, "xy"}}, {{1, "yx"}}},
  };
  return table;
}

const IdentitySpec& spec(IdentityName id) {
  for (const auto& s : specs())
    if (s.name == id) return s;
  throw Error("unknown identity");
}

// factor := letter | '(' factor factor ')'; a term is two juxtaposed factors.
class WordParser {
 public:
  WordParser(std::string_view text, std::string_view variables) : text_(text), vars_(variables) {}

  std::vector<int> parse() {
    factor();
    factor();
    out_.push_back(kProduct);
    if (pos_ != text_.size()) fail();
    return std::move(out_);
  }

 private:
  void factor() {
    if (pos_ >= text_.size()) fail();
    if (text_[pos_] == '(') {
      ++pos_;
      factor();
      factor();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail();
      ++pos_;
      out_.push_back(kProduct);
      return;
    }
    const auto v = vars_.find(text_[pos_]);
    if (v == std::string_view::npos) fail();
    out_.push_back(static_cast<int>(v));
    ++pos_;
  }
  [[noreturn]] void fail() const { throw std::logic_error("malformed identity word: " + std::string(text_)); }

  std::string_view text_;
  std::string_view vars_;
  std::size_t pos_ = 0;
  std::vector<int> out_;
};

unsigned count_products(const std::vector<int>& word) {
  return static_cast<unsigned>(std::count(word.begin(), word.end(), kProduct));
}

FormalIdentity build_formal(const IdentitySpec& s) {
  FormalIdentity f;
  f.name = s.name;
  for (char c : s.variables) f.variables.emplace_back(1, c);
  auto convert = [&](const std::vector<TermSpec>& in, std::vector<Term>& out) {
    for (const auto& t : in) out.push_back(Term{t.coeff, WordParser(t.word, s.variables).parse()});
  };
  convert(s.lhs, f.lhs);
  convert(s.rhs, f.rhs);

  // Degrees come from the first term; every other term must agree, and so
  // must the number of products (the integer-scaled kernel relies on it).
  const auto& first = f.lhs.front().word;
  f.degrees.assign(f.variables.size(), 0);
  for (int t : first)
    if (t != kProduct) ++f.degrees[static_cast<std::size_t>(t)];
  f.products = count_products(first);
  for (const auto* side : {&f.lhs, &f.rhs}) {
    for (const auto& term : *side) {
      std::vector<unsigned> deg(f.variables.size(), 0);
      for (int t : term.word)
        if (t != kProduct) ++deg[static_cast<std::size_t>(t)];
      if (deg != f.degrees || count_products(term.word) != f.products) {
        throw std::logic_error("identity " + std::string(s.label) + " is not homogeneous");
      }
    }
  }
  return f;
}

std::vector<Term> multilinearize(const std::vector<Term>& terms, const std::vector<std::vector<int>>& slots_of) {
  std::map<std::vector<int>, long> merged;
  for (const auto& term : terms) {
    // Positions of each variable's occurrences in the word.
    std::vector<std::vector<std::size_t>> positions(slots_of.size());
    for (std::size_t p = 0; p < term.word.size(); ++p)
      if (term.word[p] != kProduct) positions[static_cast<std::size_t>(term.word[p])].push_back(p);

    std::vector<std::vector<int>> perm = slots_of;  // current permutation per variable
    while (true) {
      std::vector<int> word = term.word;
      for (std::size_t v = 0; v < perm.size(); ++v)
        for (std::size_t k = 0; k < positions[v].size(); ++k) word[positions[v][k]] = perm[v][k];
      merged[word] += term.coeff;

      // Odometer over the per-variable permutations.
      std::size_t v = 0;
      while (v < perm.size() && !std::next_permutation(perm[v].begin(), perm[v].end())) ++v;
      if (v == perm.size()) break;
    }
  }
  std::vector<Term> out;
  for (auto& [word, coeff] : merged)
    if (coeff != 0) out.push_back(Term{coeff, word});
  return out;
}

Polarization build_polarization(const FormalIdentity& f) {
  Polarization pol;
  pol.identity = f.name;
  pol.products = f.products;
  std::vector<std::vector<int>> slots_of(f.variables.size());
  for (std::size_t v = 0; v < f.variables.size(); ++v) {
    for (unsigned d = 0; d < f.degrees[v]; ++d) {
      slots_of[v].push_back(static_cast<int>(pol.slot_variable.size()));
      pol.slot_variable.push_back(v);
    }
  }
  pol.arity = pol.slot_variable.size();

  // Product over variables of the nonempty subsets of its slots.
  std::vector<unsigned> mask(f.variables.size(), 1);
  while (true) {
    Polarization::Subset s;
    s.slots.resize(f.variables.size());
    for (std::size_t v = 0; v < mask.size(); ++v) {
      unsigned chosen = 0;
      for (unsigned b = 0; b < f.degrees[v]; ++b) {
        if (mask[v] & (1u << b)) {
          s.slots[v].push_back(static_cast<std::size_t>(slots_of[v][b]));
          ++chosen;
        }
      }
      if ((f.degrees[v] - chosen) % 2) s.sign = -s.sign;
    }
    pol.plan.push_back(std::move(s));
    std::size_t v = 0;
    while (v < mask.size() && ++mask[v] == (1u << f.degrees[v])) mask[v++] = 1;
    if (v == mask.size()) break;
  }

  pol.lhs = multilinearize(f.lhs, slots_of);
  pol.rhs = multilinearize(f.rhs, slots_of);
  return pol;
}

template <class T>
const T& lookup(const std::vector<T>& table, IdentityName id) {
  for (const auto& t : table)
    if (t.name == id) return t;
  throw Error("unknown identity");
}

const std::vector<FormalIdentity>& formal_table() {
  static const std::vector<FormalIdentity> table = [] {
    std::vector<FormalIdentity> v;
    for (const auto& s : specs()) v.push_back(build_formal(s));
    return v;
  }();
  return table;
}

struct NamedPolarization {
  IdentityName name;
  Polarization pol;
};

const std::vector<NamedPolarization>& polarization_table() {
  static const std::vector<NamedPolarization> table = [] {
    std::vector<NamedPolarization> v;
    for (const auto& f : formal_table()) v.push_back({f.name, build_polarization(f)});
    return v;
  }();
  return table;
}

Element eval_word(const Algebra& a, const std::vector<int>& word, std::span<const Element> leaves) {
  std::vector<Element> stack;
  for (int t : word) {
    if (t == kProduct) {
      Element rhs = std::move(stack.back());
      stack.pop_back();
      stack.back() = multiply(a, stack.back(), rhs);
    } else {
      stack.push_back(leaves[static_cast<std::size_t>(t)]);
    }
  }
  return std::move(stack.back());
}

Element eval_side(const Algebra& a, const std::vector<Term>& terms, std::span<const Element> leaves) {
  Element out(a.dim());
  for (const auto& t : terms) out.add_scaled(Scalar(t.coeff), eval_word(a, t.word, leaves));
  return out;
}

void check_tuple(const Algebra& a, const Polarization& pol, std::span<const std::size_t> tuple) {
  if (tuple.size() != pol.arity) throw DimensionError("basis tuple has wrong arity");
  for (auto i : tuple)
    if (i >= a.dim()) throw DimensionError("basis index out of range");
}

}  // namespace

const std::vector<IdentityName>& all_identities() {
  static const std::vector<IdentityName> all = [] {
    std::vector<IdentityName> v;
    for (const auto& s : specs()) v.push_back(s.name);
    return v;
  }();
  return all;
}

std::string_view to_string(IdentityName id) { return spec(id).label; }

IdentityName parse_identity_name(std::string_view name) {
  for (const auto& s : specs())
    if (s.label == name) return s.name;
  throw ParseError("unknown identity '" + std::string(name) + "'");
}

const FormalIdentity& formal_identity(IdentityName id) { return lookup(formal_table(), id); }

const Polarization& polarization(IdentityName id) { return lookup(polarization_table(), id).pol; }

std::pair<Element, Element> evaluate_identity(const Algebra& a, IdentityName id, std::span<const Element> args) {
  const FormalIdentity& f = formal_identity(id);
  if (args.size() != f.variables.size()) throw DimensionError("wrong number of identity arguments");
  for (const auto& x : args)
    if (x.dim() != a.dim()) throw DimensionError("identity argument has wrong dimension");
  return {eval_side(a, f.lhs, args), eval_side(a, f.rhs, args)};
}

std::pair<Element, Element> evaluate_inclusion_exclusion(const Algebra& a, const Polarization& pol,
                                                         std::span<const std::size_t> tuple) {
  check_tuple(a, pol, tuple);
  const FormalIdentity& f = formal_identity(pol.identity);
  const std::size_t n = a.dim();
  Element lhs(n), rhs(n);
  std::vector<Element> args(f.variables.size(), Element(n));
  for (const auto& s : pol.plan) {
    for (std::size_t v = 0; v < args.size(); ++v) {
      args[v] = Element(n);
      for (auto slot : s.slots[v]) args[v][tuple[slot]] += 1;
    }
    const Scalar sign(s.sign);
    lhs.add_scaled(sign, eval_side(a, f.lhs, args));
    rhs.add_scaled(sign, eval_side(a, f.rhs, args));
  }
  return {std::move(lhs), std::move(rhs)};
}

std::pair<Element, Element> evaluate_multilinear(const Algebra& a, const Polarization& pol,
                                                 std::span<const std::size_t> tuple) {
  check_tuple(a, pol, tuple);
  std::vector<Element> leaves;
  for (auto i : tuple) leaves.push_back(Element::basis(a.dim(), i));
  return {eval_side(a, pol.lhs, leaves), eval_side(a, pol.rhs, leaves)};
}

Verdict check_identity(const Algebra& a, IdentityName id, Engine engine) {
  const Polarization& pol = polarization(id);
  const auto failing = engine == Engine::parallel ? kernels::first_failing_tuple_parallel(a, pol)
                                                  : kernels::first_failing_tuple_reference(a, pol);
  if (!failing) return Verdict::ok();

  auto [lhs, rhs] = engine == Engine::parallel ? evaluate_multilinear(a, pol, *failing)
                                               : evaluate_inclusion_exclusion(a, pol, *failing);
  if (lhs == rhs) throw std::logic_error("identity kernel reported a tuple whose sides agree");
  Witness w;
  w.indices = *failing;
  for (auto i : *failing) w.arguments.push_back(Element::basis(a.dim(), i));
  w.lhs = std::move(lhs);
  w.rhs = std::move(rhs);
  return Verdict::failed(std::move(w), std::string(to_string(id)));
}

Verdict check_identity_random(const Algebra& a, IdentityName id, unsigned trials, std::uint64_t seed) {
  if (trials == 0) throw Error("random identity check needs at least one trial");
  const FormalIdentity& f = formal_identity(id);
  // Raw engine output (not std distributions) so the sequence is identical on
  // every standard library.
  std::mt19937_64 rng(seed);
  const std::size_t n = a.dim();
  std::vector<Element> args(f.variables.size(), Element(n));
  for (unsigned trial = 0; trial < trials; ++trial) {
    for (auto& x : args) {
      for (std::size_t i = 0; i < n; ++i) {
        const long num = static_cast<long>(rng() % 11) - 5;
        const long den = static_cast<long>(rng() % 4) + 1;
        x[i] = Scalar(num, den);
        x[i].canonicalize();
      }
    }
    auto [lhs, rhs] = evaluate_identity(a, id, args);
    if (lhs != rhs) {
      Witness w;
      w.arguments = args;
      w.lhs = std::move(lhs);
      w.rhs = std::move(rhs);
      return Verdict::failed(std::move(w), std::string(to_string(id)) + ", random trial " + std::to_string(trial));
    }
  }
  return Verdict::ok();
}

}  // namespace opalg
