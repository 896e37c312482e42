#include "generators.hpp"

#include <algorithm>
#include <functional>

namespace opalg::testing {

Scalar small_integer(Rng& rng, int range) {
  return Scalar(static_cast<long>(rng() % static_cast<unsigned>(2 * range + 1)) - range);
}

Scalar small_scalar(Rng& rng, int range, int den) {
  Scalar s(small_integer(rng, range).get_num(), static_cast<long>(rng() % static_cast<unsigned>(den)) + 1);
  s.canonicalize();
  return s;
}

Element random_element(Rng& rng, std::size_t dim) {
  Element e(dim);
  for (std::size_t i = 0; i < dim; ++i) e[i] = small_scalar(rng);
  return e;
}

Matrix random_invertible(Rng& rng, std::size_t n) {
  for (;;) {
    Matrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = small_integer(rng, 2);
    if (rank(m) == n) return m;
  }
}

Matrix random_idempotent(Rng& rng, std::size_t n, std::size_t rank) {
  const Matrix s = random_invertible(rng, n);
  Matrix d(n, n);
  for (std::size_t i = 0; i < rank; ++i) d(i, i) = 1;
  return s * d * inverse(s);
}

Algebra random_dense_algebra(Rng& rng, std::size_t dim, int range) {
  std::vector<Scalar> sc(dim * dim * dim);
  for (auto& c : sc) c = small_integer(rng, range);
  return Algebra(dim, std::move(sc));
}

Element matrix_unit(std::size_t n, std::size_t i, std::size_t j) { return Element::basis(n * n, i * n + j); }

Element matrix_element(const std::vector<std::vector<Scalar>>& rows) {
  std::vector<Scalar> flat;
  for (const auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
  return Element(std::move(flat));
}

Element flatten(const Matrix& m) { return Element(m.data()); }

Matrix unflatten(const Element& e, std::size_t n) {
  return Matrix(n, n, std::vector<Scalar>(e.coords().begin(), e.coords().end()));
}

Algebra change_basis(const Algebra& a, const Matrix& p) {
  const std::size_t n = a.dim();
  const Matrix p_inv = inverse(p);
  std::vector<Element> f;
  for (std::size_t j = 0; j < n; ++j) f.emplace_back(p.column(j));
  std::vector<Scalar> sc(n * n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Element prod = multiply(a, f[i], f[j]);
      const auto coords = p_inv * std::vector<Scalar>(prod.coords().begin(), prod.coords().end());
      std::copy(coords.begin(), coords.end(), sc.begin() + static_cast<std::ptrdiff_t>((i * n + j) * n));
    }
  }
  return Algebra(n, std::move(sc));
}

LinearOperator change_basis(const LinearOperator& r, const Matrix& p) {
  return LinearOperator(inverse(p) * r.matrix() * p);
}

std::vector<LinearOperator> derivation_basis(const Algebra& a) {
  // Unknown D(p, q) (coordinate p of D(e_q)) is variable p * n + q. Each
  // (i, j, k) gives the k-th coordinate of D(e_i e_j) - D(e_i) e_j - e_i D(e_j).
  const std::size_t n = a.dim();
  Matrix eqs(n * n * n, n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t row = (i * n + j) * n + k;
        for (std::size_t p = 0; p < n; ++p) {
          eqs(row, k * n + p) += a.sc(i, j, p);
          eqs(row, p * n + i) -= a.sc(p, j, k);
          eqs(row, p * n + j) -= a.sc(i, p, k);
        }
      }
    }
  }
  std::vector<LinearOperator> out;
  for (auto& v : null_space(eqs)) out.emplace_back(Matrix(n, n, std::move(v)));
  return out;
}

bool is_null_product(const Algebra& a) {
  const auto sc = a.structure_constants();
  return std::all_of(sc.begin(), sc.end(), [](const Scalar& s) { return sgn(s) == 0; });
}

bool is_trivial_operator(const LinearOperator& r) {
  return r == LinearOperator::zero(r.dim()) || r == LinearOperator::identity(r.dim());
}

namespace {

/// One direct summand together with the block maps allowed for it.
struct Block {
  std::string name;
  Algebra algebra;
  /// Idempotent endomorphisms phi of the block with phi(phi(x)y) = phi(xy).
  std::vector<Matrix> endos;
  /// Derivation D of the block with D^2 = 0 (possibly zero).
  Matrix nil_derivation;
};

Matrix zero_matrix(std::size_t n) { return Matrix(n, n); }

Block field_block() {
  return {"Q", Algebra(1, {Scalar(1)}), {Matrix::identity(1), zero_matrix(1)}, zero_matrix(1)};
}

/// Q[t]/(t^k) with basis 1, t, ..., t^(k-1).
Block poly_unital_block(Rng& rng, std::size_t k) {
  std::vector<Scalar> sc(k * k * k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; a + b < k; ++b) sc[(a * k + b) * k + a + b] = 1;
  Matrix eval0(k, k);
  eval0(0, 0) = 1;
  // D(t) = c t^m, so D(t^j) = j c t^(j-1+m); D^2 = 0 once 2m - 1 >= k.
  const std::size_t m = (k + 2) / 2;
  Scalar c = small_integer(rng, 3);
  if (sgn(c) == 0) c = 1;
  Matrix d(k, k);
  for (std::size_t j = 1; j < k; ++j)
    if (j - 1 + m < k) d(j - 1 + m, j) = c * static_cast<long>(j);
  return {"Q[t]/(t^" + std::to_string(k) + ")", Algebra(k, std::move(sc)),
          {Matrix::identity(k), zero_matrix(k), eval0}, d};
}

/// tQ[t]/(t^(k+1)) with basis t, ..., t^k.
Block poly_nil_block(Rng& rng, std::size_t k) {
  std::vector<Scalar> sc(k * k * k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; a + b + 1 < k; ++b) sc[(a * k + b) * k + a + b + 1] = 1;
  // D(t^j) = j c t^(j-1+m) with index j - 1; D^2 = 0 once 2m - 1 >= k + 1.
  const std::size_t m = (k + 3) / 2;
  Scalar c = small_integer(rng, 3);
  if (sgn(c) == 0) c = -1;
  Matrix d(k, k);
  for (std::size_t j = 1; j <= k; ++j)
    if (j - 1 + m <= k) d(j - 2 + m, j - 1) = c * static_cast<long>(j);
  return {"tQ[t]/(t^" + std::to_string(k + 1) + ")", Algebra(k, std::move(sc)),
          {Matrix::identity(k), zero_matrix(k)}, d};
}

Block null_block(Rng& rng, std::size_t k) {
  Matrix d(k, k);
  if (k >= 2) {
    Matrix n(k, k);
    do n(0, 1) = small_scalar(rng);
    while (sgn(n(0, 1)) == 0);
    const Matrix s = random_invertible(rng, k);
    d = s * n * inverse(s);
  }
  std::vector<Matrix> endos{Matrix::identity(k), zero_matrix(k)};
  if (k >= 2) endos.push_back(random_idempotent(rng, k, 1 + rng() % (k - 1)));
  return {"null" + std::to_string(k), Algebra(k, std::vector<Scalar>(k * k * k)), endos, d};
}

/// Upper triangular 2x2 matrices, basis E11, E12, E22.
Block upper_triangular_block() {
  const Algebra a = make_algebra(3, {{0, 0, 0, 1}, {0, 1, 1, 1}, {1, 2, 1, 1}, {2, 2, 2, 1}});
  Matrix diag(3, 3);
  diag(0, 0) = 1;
  diag(2, 2) = 1;
  Matrix corner(3, 3);
  corner(0, 0) = 1;
  return {"T2", a, {Matrix::identity(3), zero_matrix(3), diag, corner}, zero_matrix(3)};
}

/// {X in M_n : X P = X} for a random idempotent P of rank r, with the
/// left multiplication by u = P + (I - P) W P (u^2 = u, x u = x, u A in A).
Block left_ideal_block(Rng& rng, std::size_t n, std::size_t r) {
  const Matrix p = random_idempotent(rng, n, r);
  const RowEchelon ech = row_reduce(p);
  std::vector<Element> basis;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t v = 0; v < r; ++v) {
      Matrix x(n, n);
      for (std::size_t c = 0; c < n; ++c) x(i, c) = ech.reduced(v, c);
      basis.push_back(flatten(x));
    }
  }
  const Subalgebra sub = induce_subalgebra(matrix_algebra(n), basis);
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = small_integer(rng, 2);
  const Matrix u = p + (Matrix::identity(n) - p) * w * p;
  const std::size_t dim = sub.algebra.dim();
  return {"M" + std::to_string(n) + "P" + std::to_string(r), sub.algebra,
          {Matrix::identity(dim), zero_matrix(dim), left_multiplication_operator(sub.embedding, flatten(u)).matrix()},
          zero_matrix(dim)};
}

Block matrix_block() {
  return {"M2", matrix_algebra(2), {Matrix::identity(4), zero_matrix(4)}, zero_matrix(4)};
}

Algebra direct_sum(const std::vector<Block>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.algebra.dim();
  std::vector<Scalar> sc(n * n * n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    const std::size_t m = b.algebra.dim();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) sc[((off + i) * n + off + j) * n + off + k] = b.algebra.sc(i, j, k);
    off += m;
  }
  return Algebra(n, std::move(sc));
}

std::vector<std::size_t> offsets(const std::vector<Block>& blocks) {
  std::vector<std::size_t> out;
  std::size_t off = 0;
  for (const auto& b : blocks) {
    out.push_back(off);
    off += b.algebra.dim();
  }
  return out;
}

std::string describe_blocks(const std::vector<Block>& blocks) {
  std::string out;
  for (const auto& b : blocks) out += (out.empty() ? "" : "+") + b.name;
  return out;
}

/// Random new block of dimension <= room (room >= 1).
Block random_block(Rng& rng, std::size_t room, bool commutative) {
  std::vector<std::function<Block()>> options{[&] { return field_block(); },
                                              [&] { return null_block(rng, 1 + rng() % std::min<std::size_t>(room, 3)); }};
  if (room >= 2) {
    options.push_back([&] { return poly_unital_block(rng, 2 + rng() % (std::min<std::size_t>(room, 4) - 1)); });
    options.push_back([&] { return poly_nil_block(rng, 2 + rng() % (std::min<std::size_t>(room, 3) - 1)); });
  }
  if (!commutative) {
    if (room >= 2) options.push_back([&] { return left_ideal_block(rng, 2, 1); });
    if (room >= 3) options.push_back([&] { return left_ideal_block(rng, 3, 1); });
    if (room >= 3) options.push_back([&] { return upper_triangular_block(); });
    if (room >= 4) options.push_back([&] { return matrix_block(); });
    if (room >= 6) options.push_back([&] { return left_ideal_block(rng, 3, 2); });
  }
  return options[rng() % options.size()]();
}

}  // namespace

OperatorInstance random_idempotent_endomorphism(Rng& rng, bool commutative) {
  const std::size_t target = 2 + rng() % 5;
  std::vector<Block> blocks;
  std::vector<std::size_t> source;  // R(x)_i = phi_source(x_source)
  std::vector<std::size_t> phi;     // chosen endo per block (meaningful for sources)
  std::size_t dim = 0;
  while (dim < target) {
    const std::size_t room = target - dim;
    std::vector<std::size_t> copyable;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (source[i] == i && blocks[i].algebra.dim() <= room) copyable.push_back(i);
    if (!copyable.empty() && rng() % 3 == 0) {
      const std::size_t s = copyable[rng() % copyable.size()];
      blocks.push_back(blocks[s]);
      source.push_back(s);
      phi.push_back(phi[s]);
      blocks.back().name += "(copy)";
    } else {
      blocks.push_back(random_block(rng, room, commutative));
      source.push_back(blocks.size() - 1);
      phi.push_back(rng() % blocks.back().endos.size());
    }
    dim += blocks.back().algebra.dim();
  }

  const Algebra sum = direct_sum(blocks);
  const auto off = offsets(blocks);
  Matrix r(dim, dim);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Matrix& f = blocks[source[b]].endos[phi[source[b]]];
    for (std::size_t p = 0; p < f.rows(); ++p)
      for (std::size_t q = 0; q < f.cols(); ++q) r(off[b] + p, off[source[b]] + q) = f(p, q);
  }
  const Matrix change = random_invertible(rng, dim);
  return {change_basis(sum, change), change_basis(LinearOperator(r), change), describe_blocks(blocks)};
}

OperatorInstance random_square_scalar_derivation(Rng& rng, Scalar& alpha) {
  if (rng() % 5 == 0) {
    // D^2 = alpha id with alpha != 0 forces a null product in characteristic 0.
    const std::size_t dim = 2 * (1 + rng() % 3);
    do alpha = small_scalar(rng);
    while (sgn(alpha) == 0);
    Matrix c(dim, dim);
    for (std::size_t i = 0; i < dim; i += 2) {
      c(i, i + 1) = alpha;
      c(i + 1, i) = 1;
    }
    const Matrix s = random_invertible(rng, dim);
    return {Algebra(dim, std::vector<Scalar>(dim * dim * dim)), LinearOperator(s * c * inverse(s)),
            "null" + std::to_string(dim) + " (alpha != 0)"};
  }
  alpha = 0;
  const std::size_t target = 3 + rng() % 4;
  std::vector<Block> blocks;
  blocks.push_back(rng() % 2 ? poly_unital_block(rng, 3 + rng() % (std::min<std::size_t>(target, 4) - 2))
                             : poly_nil_block(rng, 2 + rng() % (std::min<std::size_t>(target, 3) - 1)));
  std::size_t dim = blocks.back().algebra.dim();
  while (dim < target) {
    blocks.push_back(random_block(rng, target - dim, true));
    dim += blocks.back().algebra.dim();
  }
  const Algebra sum = direct_sum(blocks);
  const auto off = offsets(blocks);
  Matrix d(dim, dim);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Matrix& f = blocks[b].nil_derivation;
    for (std::size_t p = 0; p < f.rows(); ++p)
      for (std::size_t q = 0; q < f.cols(); ++q) d(off[b] + p, off[b] + q) = f(p, q);
  }
  const Matrix change = random_invertible(rng, dim);
  return {change_basis(sum, change), change_basis(LinearOperator(d), change), describe_blocks(blocks)};
}

OperatorInstance random_derivation(Rng& rng) {
  const std::size_t target = 2 + rng() % 5;
  std::vector<Block> blocks;
  std::size_t dim = 0;
  while (dim < target) {
    blocks.push_back(random_block(rng, target - dim, true));
    dim += blocks.back().algebra.dim();
  }
  const Algebra a = change_basis(direct_sum(blocks), random_invertible(rng, dim));
  Matrix d(dim, dim);
  for (const auto& basis_op : derivation_basis(a)) d = d + small_integer(rng, 2) * basis_op.matrix();
  return {a, LinearOperator(d), describe_blocks(blocks)};
}

ElementInstance random_stable_element(Rng& rng, QuadraticKind kind) {
  const std::size_t n = 2 + rng() % 4;
  Matrix j(n, n);
  std::vector<std::vector<std::size_t>> groups;  // coordinate sets invariant under j
  QuadraticConstraint quad{kind, {}, std::nullopt};
  std::string shape;
  switch (kind) {
    case QuadraticKind::skew_idempotent: {
      const std::size_t ones = 1 + rng() % n;
      for (std::size_t i = 0; i < n; ++i) {
        if (i < ones) j(i, i) = -1;
        groups.push_back({i});
      }
      shape = "-idempotent rank " + std::to_string(ones);
      break;
    }
    case QuadraticKind::nilpotent2: {
      // Jordan blocks [[0,1],[0,0]] on (2i, 2i+1), zeros elsewhere.
      const std::size_t pairs = 1 + rng() % (n / 2);
      for (std::size_t i = 0; i < n; ++i) groups.push_back({i});
      for (std::size_t p = 0; p < pairs; ++p) {
        j(2 * p, 2 * p + 1) = 1;
        groups[2 * p + 1].push_back(2 * p);  // e_(2p+1) alone is not invariant
      }
      shape = "square-zero, " + std::to_string(pairs) + " block(s)";
      break;
    }
    case QuadraticKind::rb_weighted: {
      if (n % 2 == 0 && rng() % 2 == 0) {
        // Companion blocks of x^2 + l x + b, possibly irreducible over Q.
        const Scalar lambda = small_integer(rng, 3);
        const Scalar beta = small_integer(rng, 3);
        for (std::size_t i = 0; i < n; i += 2) {
          j(i, i + 1) = -beta;
          j(i + 1, i) = 1;
          j(i + 1, i + 1) = -lambda;
          groups.push_back({i, i + 1});
        }
        quad.params = {lambda, beta};
        shape = "companion";
      } else {
        const Scalar r = small_integer(rng, 2);
        const Scalar s = small_integer(rng, 2);
        for (std::size_t i = 0; i < n; ++i) {
          j(i, i) = rng() % 2 ? r : s;
          groups.push_back({i});
        }
        quad.params = {-(r + s), r * s};
        shape = "roots " + to_string(r) + "," + to_string(s);
      }
      break;
    }
    default:
      throw Error("random_stable_element: unsupported kind");
  }
  const Matrix s = random_invertible(rng, n);
  const Matrix u = s * j * inverse(s);

  for (;;) {
    std::vector<std::size_t> cols;
    for (const auto& g : groups)
      if (rng() % 2) cols.insert(cols.end(), g.begin(), g.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    const std::size_t r = 1 + rng() % n;
    const std::size_t dim = cols.size() * r;
    if (dim < 2 || dim > 6) continue;
    const RowEchelon ech = row_reduce(random_idempotent(rng, n, r));
    // A = {X : range(X) in W, X P = X}: closed, and u A in A because u W in W.
    std::vector<Element> basis;
    for (std::size_t c : cols) {
      for (std::size_t v = 0; v < r; ++v) {
        Matrix x(n, n);
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) x(a, b) = s(a, c) * ech.reduced(v, b);
        basis.push_back(flatten(x));
      }
    }
    const Matrix mix = random_invertible(rng, dim);
    std::vector<Element> mixed;
    for (std::size_t q = 0; q < dim; ++q) {
      Element e(n * n);
      for (std::size_t p = 0; p < dim; ++p) e.add_scaled(mix(p, q), basis[p]);
      mixed.push_back(std::move(e));
    }
    Subalgebra sub = induce_subalgebra(matrix_algebra(n), std::move(mixed));
    shape += ", n=" + std::to_string(n) + ", dim W=" + std::to_string(cols.size()) + ", rank P=" + std::to_string(r);
    return {std::move(sub.embedding), flatten(u), std::move(quad), shape};
  }
}

}  // namespace opalg::testing
