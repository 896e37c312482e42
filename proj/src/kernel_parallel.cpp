#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "opalg/kernels.hpp"

namespace opalg::kernels {

namespace {

// ---------------------------------------------------------------------------
// Term structure. Each multilinear term is a binary tree whose leaves are
// slots. The root product is evaluated per tuple; every proper internal
// subtree is served from a table indexed by the basis indices of its leaves
// (in occurrence order), shared between terms with the same shape.

struct Node {
  int slot = -1;  // leaf if >= 0
  int left = -1;
  int right = -1;
};

struct Tree {
  std::vector<Node> nodes;
  int root = -1;
};

Tree build_tree(const std::vector<int>& word) {
  Tree t;
  std::vector<int> stack;
  for (int tok : word) {
    if (tok == kProduct) {
      Node n;
      n.right = stack.back();
      stack.pop_back();
      n.left = stack.back();
      stack.pop_back();
      t.nodes.push_back(n);
    } else {
      Node n;
      n.slot = tok;
      t.nodes.push_back(n);
    }
    stack.push_back(static_cast<int>(t.nodes.size()) - 1);
  }
  t.root = stack.back();
  return t;
}

std::string shape_of(const Tree& t, int node) {
  const Node& n = t.nodes[static_cast<std::size_t>(node)];
  if (n.slot >= 0) return ".";
  return "(" + shape_of(t, n.left) + shape_of(t, n.right) + ")";
}

void leaves_of(const Tree& t, int node, std::vector<std::size_t>& out) {
  const Node& n = t.nodes[static_cast<std::size_t>(node)];
  if (n.slot >= 0) {
    out.push_back(static_cast<std::size_t>(n.slot));
    return;
  }
  leaves_of(t, n.left, out);
  leaves_of(t, n.right, out);
}

/// Operand of a root product: a single slot, or a subtree table lookup.
struct Operand {
  int shape = -1;                   // -1: leaf
  std::vector<std::size_t> slots;   // leaf slots in occurrence order
};

struct CompiledTerm {
  long coeff = 0;
  Operand left;
  Operand right;
};

struct ShapeInfo {
  std::string key;
  std::size_t leaves = 0;
  int left = -1;  // child shape ids, -1 for a leaf child
  int right = -1;
  bool needs_left_matrix = false;
};

struct Plan {
  std::vector<ShapeInfo> shapes;  // children before parents
  std::vector<CompiledTerm> terms;
};

int intern_shape(const Tree& t, int node, Plan& plan, std::map<std::string, int>& ids) {
  const Node& n = t.nodes[static_cast<std::size_t>(node)];
  if (n.slot >= 0) return -1;
  const std::string key = shape_of(t, node);
  if (auto it = ids.find(key); it != ids.end()) return it->second;
  ShapeInfo info;
  info.key = key;
  info.left = intern_shape(t, n.left, plan, ids);
  info.right = intern_shape(t, n.right, plan, ids);
  info.leaves = (info.left < 0 ? 1 : plan.shapes[static_cast<std::size_t>(info.left)].leaves) +
                (info.right < 0 ? 1 : plan.shapes[static_cast<std::size_t>(info.right)].leaves);
  plan.shapes.push_back(info);
  const int id = static_cast<int>(plan.shapes.size()) - 1;
  ids.emplace(key, id);
  return id;
}

Plan compile(const Polarization& pol) {
  Plan plan;
  std::map<std::string, int> ids;
  auto add = [&](const Term& term, long sign) {
    const Tree t = build_tree(term.word);
    const Node& root = t.nodes[static_cast<std::size_t>(t.root)];
    CompiledTerm ct;
    ct.coeff = sign * term.coeff;
    ct.left.shape = intern_shape(t, root.left, plan, ids);
    ct.right.shape = intern_shape(t, root.right, plan, ids);
    leaves_of(t, root.left, ct.left.slots);
    leaves_of(t, root.right, ct.right.slots);
    plan.terms.push_back(std::move(ct));
  };
  for (const auto& term : pol.lhs) add(term, 1);
  for (const auto& term : pol.rhs) add(term, -1);
  // Subtree products of two tables are evaluated through the left factor's
  // left-multiplication matrices.
  for (const auto& ct : plan.terms)
    if (ct.left.shape >= 0 && ct.right.shape >= 0) plan.shapes[static_cast<std::size_t>(ct.left.shape)].needs_left_matrix = true;
  for (const auto& s : plan.shapes)
    if (s.left >= 0 && s.right >= 0) plan.shapes[static_cast<std::size_t>(s.left)].needs_left_matrix = true;
  return plan;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

// ---------------------------------------------------------------------------
// Arithmetic policies: exact int64 (under an a-priori bound), exact GMP
// integers, and residues modulo a prime below 2^31.

struct Int64Ops {
  using Int = std::int64_t;
  static bool is_zero(Int v) { return v == 0; }
  void reduce(Int&) const {}
  void add_mul(Int& acc, Int a, Int b) const { acc += a * b; }
  void mul_into(Int& out, Int a, Int b) const { out = a * b; }
  Int from(const mpz_class& v) const { return static_cast<Int>(v.get_si()); }
  Int from(long v) const { return v; }
};

struct BignumOps {
  using Int = mpz_class;
  static bool is_zero(const Int& v) { return sgn(v) == 0; }
  void reduce(Int&) const {}
  void add_mul(Int& acc, const Int& a, const Int& b) const {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  void mul_into(Int& out, const Int& a, const Int& b) const { mpz_mul(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t()); }
  Int from(const mpz_class& v) const { return v; }
  Int from(long v) const { return Int(v); }
};

/// Reduction is lazy: accumulators collect unreduced products and are reduced
/// before they are stored or tested. The prime is chosen small enough that
/// the longest accumulation (terms * n products below p^2) fits in 64 bits.
struct ModularOps {
  using Int = std::uint64_t;
  std::uint64_t p;
  static bool is_zero(Int v) { return v == 0; }
  void reduce(Int& v) const { v %= p; }
  void add_mul(Int& acc, Int a, Int b) const { acc += a * b; }
  void mul_into(Int& out, Int a, Int b) const { out = a * b % p; }
  Int from(const mpz_class& v) const { return mpz_fdiv_ui(v.get_mpz_t(), p); }
  Int from(long v) const {
    const long r = v % static_cast<long>(p);
    return static_cast<Int>(r < 0 ? r + static_cast<long>(p) : r);
  }
};

// ---------------------------------------------------------------------------

template <class Ops>
class Evaluator {
 public:
  using Int = typename Ops::Int;

  Evaluator(const Algebra& a, const Plan& plan, const std::vector<mpz_class>& scaled, Ops ops = {})
      : n_(a.dim()), plan_(plan), ops_(ops), S_(scaled.size()) {
    for (std::size_t i = 0; i < scaled.size(); ++i) S_[i] = ops_.from(scaled[i]);
    tables_.resize(plan.shapes.size());
    left_matrices_.resize(plan.shapes.size());
    for (std::size_t s = 0; s < plan.shapes.size(); ++s) {
      build_table(s);
      if (plan.shapes[s].needs_left_matrix) build_left_matrix(s);
    }
  }

  /// Smallest flat tuple index below `limit` at which the polarization does
  /// not vanish, or `limit`.
  std::size_t first_failing(std::size_t arity, std::size_t limit) const {
    std::atomic<std::size_t> best{limit};

#pragma omp parallel
    {
      std::vector<Int> diff(n_);
      std::vector<std::size_t> tuple(arity);
      Int cv{};

#pragma omp for schedule(dynamic, 64)
      for (std::size_t t = 0; t < limit; ++t) {
        if (t >= best.load(std::memory_order_relaxed)) continue;
        std::size_t rest = t;
        for (std::size_t s = arity; s-- > 0;) {
          tuple[s] = rest % n_;
          rest /= n_;
        }
        std::fill(diff.begin(), diff.end(), Int{});
        for (const auto& term : plan_.terms) accumulate_root(term, tuple, diff, cv);
        for (auto& v : diff) ops_.reduce(v);
        const bool vanishes = std::all_of(diff.begin(), diff.end(), [](const Int& v) { return Ops::is_zero(v); });
        if (!vanishes) {
          std::size_t cur = best.load(std::memory_order_relaxed);
          while (t < cur && !best.compare_exchange_weak(cur, t, std::memory_order_relaxed)) {
          }
        }
      }
    }

    return best.load();
  }

 private:
  const Int* sc_row(std::size_t p, std::size_t q) const { return S_.data() + (p * n_ + q) * n_; }

  std::size_t width(int shape) const {
    return shape < 0 ? n_ : ipow(n_, plan_.shapes[static_cast<std::size_t>(shape)].leaves);
  }

  const Int* vector_of(int shape, std::size_t index) const {
    return tables_[static_cast<std::size_t>(shape)].data() + index * n_;
  }

  // out += c * (L * R) where each side is a basis element (shape < 0) or a
  // table vector. Table * table goes through L's left-multiplication matrix.
  void product_into(const Int& c, int lshape, std::size_t li, int rshape, std::size_t ri, Int* out, Int& cv) const {
    const std::size_t n = n_;
    if (lshape < 0 && rshape < 0) {
      const Int* row = sc_row(li, ri);
      for (std::size_t k = 0; k < n; ++k) ops_.add_mul(out[k], c, row[k]);
      return;
    }
    if (lshape < 0) {
      const Int* w = vector_of(rshape, ri);
      for (std::size_t q = 0; q < n; ++q) {
        if (Ops::is_zero(w[q])) continue;
        ops_.mul_into(cv, c, w[q]);
        const Int* row = sc_row(li, q);
        for (std::size_t k = 0; k < n; ++k) ops_.add_mul(out[k], cv, row[k]);
      }
      return;
    }
    const Int* v = vector_of(lshape, li);
    if (rshape < 0) {
      for (std::size_t p = 0; p < n; ++p) {
        if (Ops::is_zero(v[p])) continue;
        ops_.mul_into(cv, c, v[p]);
        const Int* row = sc_row(p, ri);
        for (std::size_t k = 0; k < n; ++k) ops_.add_mul(out[k], cv, row[k]);
      }
      return;
    }
    const Int* w = vector_of(rshape, ri);
    const auto& lm = left_matrices_[static_cast<std::size_t>(lshape)];
    const Int* block = lm.data() + li * n * n;  // block[q*n + k] = sum_p v_p S[p][q][k]
    for (std::size_t q = 0; q < n; ++q) {
      if (Ops::is_zero(w[q])) continue;
      ops_.mul_into(cv, c, w[q]);
      const Int* row = block + q * n;
      for (std::size_t k = 0; k < n; ++k) ops_.add_mul(out[k], cv, row[k]);
    }
  }

  void build_table(std::size_t s) {
    const ShapeInfo& info = plan_.shapes[s];
    const std::size_t lw = info.left < 0 ? n_ : ipow(n_, plan_.shapes[static_cast<std::size_t>(info.left)].leaves);
    const std::size_t rw = info.right < 0 ? n_ : ipow(n_, plan_.shapes[static_cast<std::size_t>(info.right)].leaves);
    auto& table = tables_[s];
    table.assign(lw * rw * n_, Int{});
    const std::size_t count = lw * rw;
    const Int one = ops_.from(1L);
#pragma omp parallel
    {
      Int cv{};
#pragma omp for schedule(static)
      for (std::size_t idx = 0; idx < count; ++idx) {
        Int* entry = table.data() + idx * n_;
        product_into(one, info.left, idx / rw, info.right, idx % rw, entry, cv);
        for (std::size_t k = 0; k < n_; ++k) ops_.reduce(entry[k]);
      }
    }
  }

  void build_left_matrix(std::size_t s) {
    const std::size_t n = n_;
    const std::size_t count = width(static_cast<int>(s));
    auto& lm = left_matrices_[s];
    lm.assign(count * n * n, Int{});
#pragma omp parallel for schedule(static)
    for (std::size_t idx = 0; idx < count; ++idx) {
      const Int* v = vector_of(static_cast<int>(s), idx);
      Int* block = lm.data() + idx * n * n;
      for (std::size_t p = 0; p < n; ++p) {
        if (Ops::is_zero(v[p])) continue;
        for (std::size_t q = 0; q < n; ++q) {
          const Int* row = sc_row(p, q);
          for (std::size_t k = 0; k < n; ++k) ops_.add_mul(block[q * n + k], v[p], row[k]);
        }
      }
      for (std::size_t e = 0; e < n * n; ++e) ops_.reduce(block[e]);
    }
  }

  std::size_t flat_index(const Operand& op, const std::vector<std::size_t>& tuple) const {
    std::size_t idx = 0;
    for (auto slot : op.slots) idx = idx * n_ + tuple[slot];
    return idx;
  }

  void accumulate_root(const CompiledTerm& term, const std::vector<std::size_t>& tuple, std::vector<Int>& diff,
                       Int& cv) const {
    const Int c = ops_.from(term.coeff);
    product_into(c, term.left.shape, flat_index(term.left, tuple), term.right.shape, flat_index(term.right, tuple),
                 diff.data(), cv);
  }

  std::size_t n_;
  const Plan& plan_;
  Ops ops_;
  std::vector<Int> S_;
  std::vector<std::vector<Int>> tables_;
  std::vector<std::vector<Int>> left_matrices_;
};

struct Scaled {
  std::vector<mpz_class> values;
  mpz_class max_abs;
};

Scaled scale_structure_constants(const Algebra& a) {
  mpz_class den = 1;
  for (const auto& c : a.structure_constants()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  Scaled out;
  out.max_abs = 0;
  for (const auto& c : a.structure_constants()) {
    mpz_class v = c.get_num() * (den / c.get_den());
    if (abs(v) > out.max_abs) out.max_abs = abs(v);
    out.values.push_back(std::move(v));
  }
  return out;
}

double log2_of(const mpz_class& v) {
  if (sgn(v) == 0) return 0.0;
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

// log2 bound on |entry| of a subtree value; a leaf is a basis vector.
double subtree_bound(const Plan& plan, int shape, double log_n, double log_m) {
  if (shape < 0) return 0.0;
  const ShapeInfo& s = plan.shapes[static_cast<std::size_t>(shape)];
  const double l = subtree_bound(plan, s.left, log_n, log_m) + (s.left < 0 ? 0.0 : log_n);
  const double r = subtree_bound(plan, s.right, log_n, log_m) + (s.right < 0 ? 0.0 : log_n);
  return l + r + log_m;  // |(vw)_k| <= |v|_1 |w|_1 max|S|
}

double magnitude_bound(const Plan& plan, std::size_t n, const mpz_class& max_abs) {
  const double log_n = std::log2(static_cast<double>(n));
  const double log_m = log2_of(max_abs);
  double coeff_sum = 0;
  double worst = 0;
  for (const auto& t : plan.terms) {
    coeff_sum += std::fabs(static_cast<double>(t.coeff));
    const double l = subtree_bound(plan, t.left.shape, log_n, log_m) + (t.left.shape < 0 ? 0.0 : log_n);
    const double r = subtree_bound(plan, t.right.shape, log_n, log_m) + (t.right.shape < 0 ? 0.0 : log_n);
    worst = std::max(worst, l + r + log_m);
  }
  return worst + std::log2(std::max(coeff_sum, 1.0));
}

constexpr double kInt64Budget = 60.0;

/// Largest prime size for which an accumulation of terms * n products of
/// reduced residues cannot overflow: terms * n * p^2 < 2^64.
unsigned modular_prime_bits(const Plan& plan, std::size_t n) {
  const double longest = static_cast<double>(std::max<std::size_t>(plan.terms.size(), 1) * n);
  const auto bits = static_cast<unsigned>(std::floor((64.0 - std::log2(longest)) / 2.0));
  if (bits < 8) throw Error("polarization too large for the modular kernel");
  return std::min(bits, 31u);
}

/// Consecutive primes above 2^(prime_bits - 1) whose product exceeds 2^bits.
std::vector<std::uint64_t> primes_for(double bits, unsigned prime_bits) {
  std::vector<std::uint64_t> out;
  mpz_class p = mpz_class(1) << (prime_bits - 1);
  double covered = 0;
  while (covered <= bits) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    out.push_back(p.get_ui());
    covered += std::log2(p.get_d());
  }
  return out;
}

}  // namespace

bool fits_int64(const Algebra& a, const Polarization& pol) {
  const Plan plan = compile(pol);
  const Scaled scaled = scale_structure_constants(a);
  return magnitude_bound(plan, a.dim(), scaled.max_abs) < kInt64Budget;
}

std::optional<std::vector<std::size_t>> first_failing_tuple_parallel(const Algebra& a, const Polarization& pol,
                                                                     Options options) {
  const Plan plan = compile(pol);
  const Scaled scaled = scale_structure_constants(a);
  const double bound = magnitude_bound(plan, a.dim(), scaled.max_abs);
  const bool small = bound < kInt64Budget;
  IntPath path = options.path;
  if (path == IntPath::automatic) path = small ? IntPath::int64 : IntPath::modular;
  if (path == IntPath::int64 && !small) throw Error("structure constants too large for the int64 kernel");

  const std::size_t total = ipow(a.dim(), pol.arity);
  std::size_t found = total;
  switch (path) {
    case IntPath::int64:
      found = Evaluator<Int64Ops>(a, plan, scaled.values).first_failing(pol.arity, total);
      break;
    case IntPath::bignum:
      found = Evaluator<BignumOps>(a, plan, scaled.values).first_failing(pol.arity, total);
      break;
    default:
      // A value of absolute value below 2^bound vanishes iff it vanishes
      // modulo primes whose product exceeds 2^(bound + 1). A tuple fails iff
      // some prime sees a nonzero residue, so each later prime only needs to
      // search below the best failure found so far.
      for (const auto p : primes_for(bound + 1.0, modular_prime_bits(plan, a.dim()))) {
        if (found == 0) break;
        found = Evaluator<ModularOps>(a, plan, scaled.values, ModularOps{p}).first_failing(pol.arity, found);
      }
      break;
  }
  if (found == total) return std::nullopt;
  std::vector<std::size_t> tuple(pol.arity);
  for (std::size_t s = pol.arity; s-- > 0;) {
    tuple[s] = found % a.dim();
    found /= a.dim();
  }
  return tuple;
}

}  // namespace opalg::kernels
