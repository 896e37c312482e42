#include "opalg/algebra.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <tuple>

#include "detail.hpp"

namespace opalg {

struct Algebra::FlagCache {
  // -1 unknown, 0 false, 1 true. Write-once: every writer stores the same
  // value because it is a pure function of the structure constants.
  std::atomic<int> associative{-1};
  std::atomic<int> commutative{-1};
};

namespace {

std::optional<bool> read_flag(const std::atomic<int>& flag) {
  const int v = flag.load(std::memory_order_acquire);
  if (v < 0) return std::nullopt;
  return v == 1;
}

std::vector<std::string> default_labels(std::size_t dim) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < dim; ++i) labels.push_back("e" + std::to_string(i + 1));
  return labels;
}

}  // namespace

Algebra::Algebra(std::size_t dim, std::vector<Scalar> dense_sc, std::vector<std::string> labels)
    : dim_(dim), sc_(std::move(dense_sc)), labels_(std::move(labels)), flags_(std::make_shared<FlagCache>()) {
  if (dim_ == 0) throw DimensionError("algebra dimension must be positive");
  if (sc_.size() != dim_ * dim_ * dim_) throw DimensionError("structure constant tensor has wrong size");
  if (labels_.empty()) labels_ = default_labels(dim_);
  if (labels_.size() != dim_) throw DimensionError("label count does not match dimension");
}

Algebra Algebra::with_metadata(std::map<std::string, std::string> metadata) const {
  Algebra copy = *this;
  copy.metadata_ = std::move(metadata);
  return copy;
}

std::optional<bool> Algebra::cached_associative() const { return read_flag(flags_->associative); }
std::optional<bool> Algebra::cached_commutative() const { return read_flag(flags_->commutative); }

Algebra make_algebra(std::size_t dim, const std::vector<ScEntry>& entries, std::vector<std::string> labels) {
  if (dim == 0) throw DimensionError("algebra dimension must be positive");
  std::vector<Scalar> sc(dim * dim * dim);
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  for (const auto& e : entries) {
    if (e.i >= dim || e.j >= dim || e.k >= dim) {
      throw DimensionError("structure constant index out of range: (" + std::to_string(e.i) + "," +
                           std::to_string(e.j) + "," + std::to_string(e.k) + ")");
    }
    if (!seen.emplace(e.i, e.j, e.k).second) {
      throw Error("duplicate structure constant entry: (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                  "," + std::to_string(e.k) + ")");
    }
    sc[(e.i * dim + e.j) * dim + e.k] = e.value;
  }
  return Algebra(dim, std::move(sc), std::move(labels));
}

Algebra matrix_algebra(std::size_t n) {
  if (n == 0) throw DimensionError("matrix size must be positive");
  const std::size_t d = n * n;
  std::vector<Scalar> sc(d * d * d);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
      for (std::size_t l = 0; l < n; ++l) {
        // E_ij E_jl = E_il
        sc[((i * n + j) * d + (j * n + l)) * d + (i * n + l)] = 1;
      }
    }
  }
  return Algebra(d, std::move(sc), std::move(labels));
}

Element multiply(const Algebra& a, const Element& x, const Element& y) {
  const std::size_t n = a.dim();
  if (x.dim() != n || y.dim() != n) {
    throw DimensionError("multiply: element dimension " + std::to_string(x.dim()) + "/" + std::to_string(y.dim()) +
                         " does not match algebra dimension " + std::to_string(n));
  }
  Element out(n);
  Scalar coeff;
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(y[j]) == 0) continue;
      coeff = x[i] * y[j];
      const auto row = a.basis_product(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        if (sgn(row[k]) != 0) out[k] += coeff * row[k];
      }
    }
  }
  return out;
}

Verdict is_associative(const Algebra& a) {
  const std::size_t n = a.dim();
  Verdict verdict;
  for (std::size_t i = 0; i < n && verdict.pass; ++i) {
    for (std::size_t j = 0; j < n && verdict.pass; ++j) {
      const auto ij = a.basis_product(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        Element lhs(n), rhs(n);
        for (std::size_t p = 0; p < n; ++p) {
          if (sgn(ij[p]) == 0) continue;
          const auto pk = a.basis_product(p, k);
          for (std::size_t q = 0; q < n; ++q) lhs[q] += ij[p] * pk[q];
        }
        const auto jk = a.basis_product(j, k);
        for (std::size_t p = 0; p < n; ++p) {
          if (sgn(jk[p]) == 0) continue;
          const auto ip = a.basis_product(i, p);
          for (std::size_t q = 0; q < n; ++q) rhs[q] += jk[p] * ip[q];
        }
        if (lhs != rhs) {
          verdict = Verdict::failed(Witness{{i, j, k},
                                            {Element::basis(n, i), Element::basis(n, j), Element::basis(n, k)},
                                            std::move(lhs),
                                            std::move(rhs),
                                            {}});
          break;
        }
      }
    }
  }
  a.flags_->associative.store(verdict.pass ? 1 : 0, std::memory_order_release);
  return verdict;
}

Verdict is_commutative(const Algebra& a) {
  const std::size_t n = a.dim();
  Verdict verdict;
  for (std::size_t i = 0; i < n && verdict.pass; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto ij = a.basis_product(i, j);
      const auto ji = a.basis_product(j, i);
      if (!std::equal(ij.begin(), ij.end(), ji.begin())) {
        verdict = Verdict::failed(Witness{{i, j},
                                          {Element::basis(n, i), Element::basis(n, j)},
                                          Element(std::vector<Scalar>(ij.begin(), ij.end())),
                                          Element(std::vector<Scalar>(ji.begin(), ji.end())),
                                          {}});
        break;
      }
    }
  }
  a.flags_->commutative.store(verdict.pass ? 1 : 0, std::memory_order_release);
  return verdict;
}

std::optional<Element> identity_element(const Algebra& a) {
  const std::size_t n = a.dim();
  // Unknown e: sum_i e_i sc(i,j,k) = delta_jk and sum_i e_i sc(j,i,k) = delta_jk.
  Matrix m(2 * n * n, n);
  std::vector<Scalar> rhs(2 * n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t left = j * n + k;
      const std::size_t right = n * n + left;
      for (std::size_t i = 0; i < n; ++i) {
        m(left, i) = a.sc(i, j, k);
        m(right, i) = a.sc(j, i, k);
      }
      if (j == k) rhs[left] = rhs[right] = 1;
    }
  }
  auto sol = solve(m, rhs);
  if (!sol) return std::nullopt;
  return Element(std::move(sol->particular));
}

std::string fingerprint(const Algebra& a) {
  std::vector<std::string> parts{"algebra", std::to_string(a.dim())};
  for (const auto& c : a.structure_constants()) parts.push_back(to_string(c));
  for (const auto& l : a.labels()) parts.push_back(l);
  return detail::fnv1a_hex(parts);
}

NotClosedError::NotClosedError(std::size_t i_, std::size_t j_, Element residual_)
    : Error("span is not closed under the product: b" + std::to_string(i_) + " * b" + std::to_string(j_) +
            " leaves the span with residual " + to_string(residual_)),
      i(i_),
      j(j_),
      residual(std::move(residual_)) {}

Embedding::Embedding(Algebra ambient, std::vector<Element> basis)
    : ambient_(std::move(ambient)), basis_(std::move(basis)) {}

Embedding Embedding::of_span(Algebra ambient, std::vector<Element> basis) {
  if (basis.empty()) throw DimensionError("embedding basis is empty");
  const std::size_t big = ambient.dim();
  const std::size_t m = basis.size();
  for (const auto& b : basis) {
    if (b.dim() != big) throw DimensionError("embedding basis element has wrong dimension");
  }
  Matrix bt(m, big);  // rows are basis vectors
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < big; ++c) bt(r, c) = basis[r][c];
  RowEchelon ech = row_reduce(bt);
  if (ech.pivots.size() < m) throw LinearDependenceError("embedding basis is linearly dependent");

  Embedding emb(std::move(ambient), std::move(basis));
  emb.pivot_rows_ = ech.pivots;
  Matrix square(m, m);  // square(p, r) = basis[r][pivot_rows[p]]
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t r = 0; r < m; ++r) square(p, r) = emb.basis_[r][emb.pivot_rows_[p]];
  emb.pivot_inverse_ = inverse(square);

  const auto ker = null_space(bt);
  emb.annihilator_ = Matrix(ker.size(), big);
  for (std::size_t r = 0; r < ker.size(); ++r)
    for (std::size_t c = 0; c < big; ++c) emb.annihilator_(r, c) = ker[r][c];
  return emb;
}

Element Embedding::to_ambient(const Element& coords) const {
  if (coords.dim() != dim()) throw DimensionError("span coordinates have wrong dimension");
  Element out(ambient_.dim());
  for (std::size_t r = 0; r < dim(); ++r) out.add_scaled(coords[r], basis_[r]);
  return out;
}

namespace {

Element pivot_coordinates(const Matrix& pivot_inverse, const std::vector<std::size_t>& pivots, const Element& v) {
  std::vector<Scalar> sub(pivots.size());
  for (std::size_t p = 0; p < pivots.size(); ++p) sub[p] = v[pivots[p]];
  return Element(pivot_inverse * sub);
}

}  // namespace

Element Embedding::residual(const Element& v) const {
  if (v.dim() != ambient_.dim()) throw DimensionError("ambient element has wrong dimension");
  return v - to_ambient(pivot_coordinates(pivot_inverse_, pivot_rows_, v));
}

std::optional<Element> Embedding::coordinates(const Element& v) const {
  if (v.dim() != ambient_.dim()) throw DimensionError("ambient element has wrong dimension");
  Element c = pivot_coordinates(pivot_inverse_, pivot_rows_, v);
  if (!(v - to_ambient(c)).is_zero()) return std::nullopt;
  return c;
}

Subalgebra induce_subalgebra(const Algebra& ambient, std::vector<Element> basis, std::vector<std::string> labels) {
  Embedding emb = Embedding::of_span(ambient, std::move(basis));
  const std::size_t m = emb.dim();
  std::vector<Scalar> sc(m * m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Element prod = multiply(ambient, emb.basis()[i], emb.basis()[j]);
      auto coords = emb.coordinates(prod);
      if (!coords) throw NotClosedError(i, j, emb.residual(prod));
      for (std::size_t k = 0; k < m; ++k) sc[(i * m + j) * m + k] = (*coords)[k];
    }
  }
  Algebra sub(m, std::move(sc), std::move(labels));
  sub = sub.with_metadata({{"construction", "subalgebra"}, {"source", fingerprint(ambient)}});
  return Subalgebra{std::move(sub), std::move(emb)};
}

}  // namespace opalg
