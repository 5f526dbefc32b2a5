#include <doctest.h>

#include "freecover/covers.hpp"
#include "freecover/error.hpp"
#include "freecover/stallings.hpp"

using namespace freecover;

namespace {
Word W(const char* s, int n = 2) { return Word::parse(s, n); }
FiniteQuotient s3() { return FiniteQuotient::from_permutations(2, {{1, 0, 2}, {0, 2, 1}}); }
}  // namespace

TEST_CASE("mod_q_quotient") {
  const auto k4 = mod_q_quotient(2, 2);
  CHECK(k4.order() == 4);
  CHECK(k4.is_abelian());
  CHECK(k4.validate());
  for (int g = 1; g < 4; ++g) CHECK(k4.element_order(g) == 2);
  CHECK(mod_q_quotient(2, 3).order() == 9);
  CHECK(mod_q_quotient(3, 2).order() == 8);
  CHECK(k4.label(k4.generator_image(2)) == "01");
  CHECK(k4.label(k4.generator_image(1)) == "10");
  CHECK(k4.parse_element("11") == k4.evaluate(W("ab")));
  CHECK(k4.parse_element("ab") == 3);
  CHECK_THROWS_AS(mod_q_quotient(2, 1), InputError);
  CHECK_THROWS_AS(k4.parse_element("12"), InputError);
}

TEST_CASE("permutation quotients") {
  const auto g = s3();
  CHECK(g.order() == 6);
  CHECK_FALSE(g.is_abelian());
  CHECK(g.validate());
  CHECK(g.multiply(g.generator_image(1), g.generator_image(1)) == 0);
  CHECK(g.multiply(g.generator_image(1), g.generator_image(2)) != g.multiply(g.generator_image(2), g.generator_image(1)));
  for (int x = 0; x < 6; ++x) CHECK(g.multiply(x, g.inverse(x)) == 0);
  CHECK_THROWS_AS(FiniteQuotient::from_regular_action(2, {{1, 0, 2}, {0, 1, 2}}), InputError);
  CHECK_THROWS_AS(FiniteQuotient::from_regular_action(2, {{0, 0}, {1, 0}}), InputError);
}

TEST_CASE("build_cover") {
  const auto x = build_cover(mod_q_quotient(2, 2));
  CHECK(x.degree() == 4);
  CHECK(x.graph().edge_count() == 8);
  CHECK(x.graph().is_cover());
  CHECK(x.rank() == 5);
  CHECK(x.tree_edges().size() == 3);
  for (const auto& c : x.cycle_basis()) {
    CHECK(x.contains(c.loop));
    CHECK(contains(fold(x.graph()), c.loop));
  }
  const auto r = build_cover(FiniteQuotient::trivial(2));
  CHECK(r.graph().is_rose());
  REQUIRE(r.rank() == 2);
  CHECK(r.cycle_basis()[0].loop == W("a"));
  CHECK(r.cycle_basis()[1].loop == W("b"));
  const auto y = build_cover(mod_q_quotient(2, 3));
  CHECK(y.degree() == 9);
  CHECK(y.graph().edge_count() == 18);
  CHECK(y.rank() == 10);
  const auto j = x.to_json();
  CHECK(j["cycle_basis"].size() == 5);
  CHECK(j["quotient"]["table"].size() == 4);
}

TEST_CASE("fully characteristic certificate") {
  CHECK(is_fully_characteristic_verbal(mod_q_quotient(2, 2)));
  CHECK(is_fully_characteristic_verbal(mod_q_quotient(3, 5)));
  CHECK(is_fully_characteristic_verbal(FiniteQuotient::trivial(2)));
  CHECK_FALSE(is_fully_characteristic_verbal(s3()));
  // (Z/2)^2 presented through permutations has no declared exponent.
  CHECK_FALSE(is_fully_characteristic_verbal(FiniteQuotient::from_permutations(2, {{1, 0, 2, 3}, {0, 1, 3, 2}})));
  CHECK(is_characteristic_nielsen(mod_q_quotient(2, 3)));
  CHECK(is_characteristic_nielsen(s3()) == false);
}

TEST_CASE("induced_quotient_endo") {
  const auto k4 = mod_q_quotient(2, 2);
  auto r = induced_quotient_endo(Endomorphism::identity(2), k4);
  CHECK(r.kind == InducedKind::kIdentity);
  r = induced_quotient_endo(Endomorphism::inner(W("abb")), k4);
  CHECK(r.kind == InducedKind::kIdentity);
  r = induced_quotient_endo(Endomorphism::parse("ab,b", 2), k4);
  CHECK(r.kind == InducedKind::kAutomorphism);
  CHECK(r.map == std::vector<int>{0, 1, 3, 2});
  r = induced_quotient_endo(Endomorphism::parse("aa,b", 2), k4);
  CHECK(r.kind == InducedKind::kProperEndomorphism);
  CHECK(to_string(r.kind) == "proper");
  // a -> ab sends the involution a to an element of order 3 in S_3.
  CHECK_THROWS_AS(induced_quotient_endo(Endomorphism::parse("ab,b", 2), s3()), PreconditionError);
}

TEST_CASE("towers") {
  auto t = build_tower(2, 2, 1);
  CHECK(t.level(1).cover.degree() == 4);
  CHECK(t.total_degree(1) == 4);
  t = build_tower(2, 2, 2);
  CHECK(t.level(2).relative_degree == 32);
  CHECK(t.level(2).cover.degree() == 128);
  CHECK(t.level(2).cover.rank() == 129);
  CHECK(t.level(2).cover.quotient().validate());
  CHECK(t.validate_descent());
  CHECK(build_tower(3, 3, 1).level(1).cover.degree() == 27);
  CHECK(build_tower(2, 5, 1).level(1).cover.degree() == 25);
  try {
    build_tower(2, 2, 3);
    FAIL("level 3 should exceed the budget");
  } catch (const BudgetExceeded& e) {
    CHECK(e.level_reached() == 2);
  }
  CHECK_THROWS_AS(build_tower(2, 2, 2, 100), BudgetExceeded);
  CHECK_THROWS_AS(build_tower(2, 2, 0), InputError);
  const auto j = t.to_json();
  CHECK(j["levels"].size() == 2);
}

TEST_CASE("separate_word") {
  CHECK(separate_word(W("a"), 2, 3).level == 1);
  CHECK(separate_word(W("a"), 3, 3).level == 1);
  CHECK(separate_word(commutator(W("a"), W("b")), 2, 3).level == 2);
  CHECK(separate_word(W("aa"), 2, 3).level == 2);
  CHECK(separate_word(W("aaa"), 2, 3).level == 1);
  // Level 2 of the mod-3 tower has 9 * 3^10 sheets.
  const auto cube = separate_word(W("aaa"), 3, 3);
  CHECK_FALSE(cube.level.has_value());
  CHECK(cube.levels_examined == 1);
  CHECK(cube.budget_exhausted);
  const auto s = separate_word(commutator(commutator(W("a"), W("b")), commutator(W("aa"), W("b"))), 2, 5);
  CHECK_FALSE(s.level.has_value());
  CHECK(s.levels_examined == 2);
  CHECK(s.budget_exhausted);
  CHECK_THROWS_AS(separate_word(Word(2), 2, 2), InputError);
}
