#include <doctest.h>

#include "generators.hpp"
#include "opalg/fixtures.hpp"
#include "opalg/operator.hpp"

using namespace opalg;
using testing::matrix_element;
using testing::matrix_unit;

namespace {

FixtureInstance at_sample(std::string_view name) {
  const FixtureBundle f = load_fixture(name);
  return instantiate(f, f.sample);
}

OperatorProperty prop(std::string_view text) { return parse_operator_property(text); }

}  // namespace

TEST_CASE("left multiplication by the idempotent right identity u(2)") {
  const FixtureInstance inst = at_sample("F1b");
  REQUIRE(inst.op);
  const LinearOperator& r = *inst.op;
  CHECK(r.image(0) == Element(std::vector<Scalar>{1, 0, 0}));
  CHECK(r.image(1) == Element(std::vector<Scalar>{2, -1, 1}));
  CHECK(r.image(2) == Element(std::vector<Scalar>{2, -2, 2}));
  CHECK(r * r == r);
  CHECK(check_operator_property(inst.algebra.algebra, r, prop("endomorphism")).pass);
  CHECK(check_operator_property(inst.algebra.algebra, r, prop("idempotent_op")).pass);
  CHECK(!check_operator_property(inst.algebra.algebra, r, prop("involution_op")).pass);
}

TEST_CASE("row swap on equal-last-columns matrices is an involutive endomorphism") {
  const FixtureInstance inst = at_sample("F2");
  REQUIRE(inst.op);
  const Algebra& a = inst.algebra.algebra;
  CHECK(*inst.op * *inst.op == LinearOperator::identity(a.dim()));
  CHECK(check_operator_property(a, *inst.op, prop("involution_op")).pass);
  CHECK(check_operator_property(a, *inst.op, prop("endomorphism")).pass);
  CHECK(check_operator_property(a, *inst.op, prop("scaled_involution_op(1)")).pass);
  CHECK(!check_operator_property(a, *inst.op, prop("scaled_involution_op(2)")).pass);
}

TEST_CASE("left multiplication that leaves the span is an error") {
  const FixtureInstance inst = at_sample("F8");
  const Embedding& emb = inst.algebra.embedding;
  CHECK_NOTHROW(left_multiplication_operator(emb, inst.u));
  try {
    left_multiplication_operator(emb, matrix_unit(3, 2, 0));
    FAIL("expected SpanEscapeError");
  } catch (const SpanEscapeError& e) {
    CHECK(!e.residual.is_zero());
    CHECK(e.basis_index < emb.dim());
  }
  CHECK_THROWS_AS(left_multiplication_operator(emb, Element(4)), DimensionError);
}

TEST_CASE("square-zero operator: weight-0 Rota-Baxter, and the shift by the identity fails with a frozen witness") {
  const FixtureInstance inst = at_sample("F9");
  REQUIRE(inst.op);
  const Algebra& a = inst.algebra.algebra;
  CHECK(check_operator_property(a, *inst.op, prop("rota_baxter(0)")).pass);
  CHECK(check_operator_property(a, *inst.op, prop("rota_baxter_mirrored(0)")).pass);
  CHECK(!check_operator_property(a, *inst.op, prop("rota_baxter(1)")).pass);

  const LinearOperator shifted = *inst.op + LinearOperator::identity(a.dim());
  const Verdict v = check_operator_property(a, shifted, prop("rota_baxter(0)"));
  REQUIRE(!v.pass);
  REQUIRE(v.witness);
  CHECK(v.witness->indices == std::vector<std::size_t>{0, 1});
  CHECK(v.witness->lhs == Element(std::vector<Scalar>{0, 0}));
  CHECK(v.witness->rhs == Element(std::vector<Scalar>{3, 2}));
  const auto [lhs, rhs] =
      operator_property_sides(a, shifted, prop("rota_baxter(0)"), Element::basis(2, 0), Element::basis(2, 1));
  CHECK(lhs == v.witness->lhs);
  CHECK(rhs == v.witness->rhs);
}

TEST_CASE("the zero and identity operators") {
  const Algebra m2 = matrix_algebra(2);
  const auto zero = LinearOperator::zero(4), id = LinearOperator::identity(4);
  for (const char* p : {"endomorphism", "idempotent_op", "derivation", "left_averaging", "rota_baxter(5)",
                        "rota_baxter_weighted(1,0)", "scaled_idempotent_op(3)"}) {
    CAPTURE(p);
    CHECK(check_operator_property(m2, zero, prop(p)).pass);
  }
  CHECK(!check_operator_property(m2, zero, prop("rota_baxter_weighted(1,2)")).pass);
  CHECK(check_operator_property(m2, id, prop("endomorphism")).pass);
  CHECK(check_operator_property(m2, id, prop("involution_op")).pass);
  CHECK(check_operator_property(m2, id, prop("rota_baxter(-1)")).pass);
  CHECK(!check_operator_property(m2, id, prop("derivation")).pass);
}

TEST_CASE("inner derivations of the matrix algebra") {
  testing::Rng rng(5);
  const Algebra m3 = matrix_algebra(3);
  const Element c = testing::random_element(rng, 9);
  Matrix ad(9, 9);
  for (std::size_t j = 0; j < 9; ++j) {
    const Element e = Element::basis(9, j);
    const Element image = multiply(m3, c, e) - multiply(m3, e, c);
    for (std::size_t i = 0; i < 9; ++i) ad(i, j) = image[i];
  }
  CHECK(check_operator_property(m3, make_operator(m3, ad), prop("derivation")).pass);
  CHECK(!check_operator_property(m3, make_operator(m3, ad), prop("endomorphism")).pass);
}

TEST_CASE("property parsing") {
  const OperatorProperty p = prop(" rota_baxter_weighted( 1/2 , -3 ) ");
  CHECK(p.kind == OperatorKind::rota_baxter_weighted);
  CHECK(p.params == std::vector<Scalar>{Scalar(1, 2), -3});
  CHECK(to_string(p) == "rota_baxter_weighted(1/2,-3)");
  CHECK(to_string(prop("endomorphism")) == "endomorphism");
  CHECK(all_operator_kinds().size() == 10);
  for (const OperatorKind k : all_operator_kinds()) CHECK(parse_operator_kind(to_string(k)) == k);
  CHECK_THROWS_AS(prop("rota_baxter"), ParseError);
  CHECK_THROWS_AS(prop("endomorphism(1)"), ParseError);
  CHECK_THROWS_AS(prop("rota_baxter(1"), ParseError);
  CHECK_THROWS_AS(prop("sideways"), ParseError);
  CHECK_THROWS_AS(check_operator_property(matrix_algebra(2), LinearOperator::identity(3), prop("endomorphism")),
                  DimensionError);
  CHECK_THROWS(check_operator_property(matrix_algebra(2), LinearOperator::identity(4),
                                       OperatorProperty{OperatorKind::rota_baxter, {}}));
}

TEST_CASE("property: basis-pair verdicts agree with random pairs") {
  testing::Rng rng(7);
  const std::vector<std::string> props{"endomorphism", "derivation", "left_averaging", "rota_baxter(1)",
                                       "rota_baxter(0)", "idempotent_op"};
  for (int trial = 0; trial < 40; ++trial) {
    const bool structured = trial % 2 == 0;
    const auto inst = structured ? testing::random_idempotent_endomorphism(rng, trial % 4 == 0)
                                 : testing::OperatorInstance{testing::random_dense_algebra(rng, 3, 2),
                                                             LinearOperator(testing::random_idempotent(rng, 3, 1)),
                                                             "dense"};
    for (const auto& text : props) {
      const OperatorProperty p = prop(text);
      bool random_pass = true;
      for (int k = 0; k < 60 && random_pass; ++k) {
        const Element x = testing::random_element(rng, inst.algebra.dim());
        const Element y = testing::random_element(rng, inst.algebra.dim());
        const auto [lhs, rhs] = operator_property_sides(inst.algebra, inst.op, p, x, y);
        random_pass = lhs == rhs;
      }
      CAPTURE(text);
      CAPTURE(inst.shape);
      CHECK(check_operator_property(inst.algebra, inst.op, p).pass == random_pass);
    }
  }
}

TEST_CASE("property: left multiplication composes, R_u R_v = R_{uv}") {
  testing::Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = testing::random_stable_element(rng, trial % 2 ? QuadraticKind::nilpotent2
                                                                     : QuadraticKind::skew_idempotent);
    const Embedding& emb = inst.embedding;
    const Algebra& m = emb.ambient();
    const LinearOperator r = left_multiplication_operator(emb, inst.u);
    CHECK(r * r == left_multiplication_operator(emb, multiply(m, inst.u, inst.u)));
  }
}

TEST_CASE("property: a right identity that is idempotent gives an idempotent endomorphism") {
  testing::Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    const Matrix p = testing::random_idempotent(rng, n, 1 + rng() % (n - 1));
    // A = {X : XP = X} has P as a right identity, and PX stays in A.
    std::vector<Element> basis;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Element x = testing::flatten(testing::unflatten(matrix_unit(n, i, j), n) * p);
        basis.push_back(x);
      }
    std::vector<Element> independent;
    for (const auto& b : basis) {
      if (b.is_zero()) continue;
      independent.push_back(b);
      try {
        Embedding::of_span(matrix_algebra(n), independent);
      } catch (const LinearDependenceError&) {
        independent.pop_back();
      }
    }
    const Subalgebra sub = induce_subalgebra(matrix_algebra(n), independent);
    const LinearOperator r = left_multiplication_operator(sub.embedding, testing::flatten(p));
    CHECK(check_operator_property(sub.algebra, r, prop("idempotent_op")).pass);
    CHECK(check_operator_property(sub.algebra, r, prop("endomorphism")).pass);
  }
}
