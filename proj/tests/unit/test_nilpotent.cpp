#include <doctest.h>

#include "freecover/error.hpp"
#include "freecover/nilpotent.hpp"
#include "support.hpp"

using namespace freecover;

namespace {
Word W(const char* s, int n = 2) { return Word::parse(s, n); }

bool agrees_with_oracle(const Word& w, int cap) {
  const auto ours = magnus(w, cap);
  const auto oracle = testing::symbolic_magnus(w, cap);
  if (ours.coefficients().size() != oracle.size()) return false;
  for (const auto& [m, c] : ours.coefficients()) {
    std::string key;
    for (int i : m) key += static_cast<char>('0' + i);
    auto it = oracle.find(key);
    if (it == oracle.end() || c != Integer(static_cast<long>(it->second))) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("magnus expansion") {
  CHECK(magnus(W("a"), 2).str() == "1 + X1");
  CHECK(magnus(W("A"), 2).str() == "1 - X1 + X1X1");
  CHECK(magnus(commutator(W("a"), W("b")), 2).str() == "1 + X1X2 - X2X1");
  CHECK(magnus(Word(2), 3).is_one());
  CHECK(magnus(W("aa"), 2).str() == "1 + 2X1 + X1X1");
  CHECK(magnus(commutator(W("a"), W("b")), 1).is_one());
  CHECK(magnus(commutator(W("a"), W("b")), 3).lowest_nonconstant_degree() == 2);
  CHECK_THROWS_AS(magnus(W("a"), 0), InputError);
  CHECK_THROWS_AS(magnus(W("a"), kMaxMagnusCap + 1), InputError);
  for (const char* s : {"ab", "ABab", "aabAbbA", "baBBAA"})
    for (int cap = 1; cap <= 4; ++cap) CHECK(agrees_with_oracle(W(s), cap));
}

TEST_CASE("congruence modulo the lower central series") {
  CHECK(congruent_mod_lcs(W("ab"), W("ba"), 1));
  CHECK_FALSE(congruent_mod_lcs(W("ab"), W("ba"), 2));
  const Word f = commutator(W("a"), W("b"));
  const Word x = W("aB"), y = W("bb");
  CHECK(congruent_mod_lcs(commutator(f, x * y), commutator(f, y) * commutator(f, x), 3));
  CHECK_THROWS_AS(congruent_mod_lcs(W("a"), W("a"), 0), InputError);
}

TEST_CASE("left-normed commutators") {
  CHECK(left_normed_commutators(2, 1).size() == 2);
  CHECK(left_normed_commutators(2, 2).size() == 2);
  CHECK(left_normed_commutators(2, 3).size() == 4);
  CHECK(left_normed_commutators(3, 3).size() == 18);
  for (const auto& c : left_normed_commutators(2, 3)) {
    CHECK(magnus(c, 2).is_one());
    CHECK_FALSE(magnus(c, 3).is_one());
  }
}

TEST_CASE("action on layers") {
  const auto phi = conjugating_endomorphism(witness_alpha(2));
  for (int k = 1; k <= 3; ++k) CHECK(acts_trivially_on_lcs_quotient(phi, k, left_normed_commutators(2, k)));
  CHECK_FALSE(acts_trivially_on_lcs_quotient(Endomorphism::parse("ab,b", 2), 1, left_normed_commutators(2, 1)));
  CHECK_THROWS_AS(acts_trivially_on_lcs_quotient(phi, 2, {W("a")}), PreconditionError);
}

TEST_CASE("nilpotent quotient surjectivity") {
  const auto phi = conjugating_endomorphism(witness_alpha(2));
  for (int k = 2; k <= 6; ++k) CHECK(is_epi_on_nilpotent_quotient(phi, k));
  CHECK_FALSE(is_epi_on_nilpotent_quotient(Endomorphism::parse("aa,b", 2), 2));
  CHECK(is_epi_on_nilpotent_quotient(Endomorphism::parse("ab,b", 2), 4));
  CHECK_THROWS_AS(is_epi_on_nilpotent_quotient(phi, 1), InputError);
}

TEST_CASE("witness words") {
  CHECK(witness_alpha(2) == W("baBBAA"));
  CHECK(witness_alpha(4) == Word::parse("dcbaDDCCBBAA", 4));
  CHECK(witness_alpha_variant(2) == W("baBBA"));
  CHECK(witness_alpha_variant(3) == Word::parse("cbaCCBA", 3));
  CHECK(witness_alpha_variant(4) == Word::parse("dcbaDDccBA", 4));
  const auto phi = conjugating_endomorphism(witness_alpha(2));
  CHECK(phi.image(2) == W("b"));
  CHECK(phi.image(1) == invert(witness_alpha(2)) * W("a") * witness_alpha(2));
}

TEST_CASE("witness report") {
  const auto r = conjugation_witness(2);
  CHECK(r.alpha == W("baBBAA"));
  CHECK_FALSE(r.surjective);
  CHECK(r.nilpotent_epi.size() == 5);
  CHECK(r.not_separable_certified);
  CHECK(r.alpha_graph_contained);
  REQUIRE(r.whitehead_minimal_length.has_value());
  CHECK(*r.whitehead_minimal_length > 1);
  CHECK(r.certificate.certificate.has_value());
  const auto j = to_json(r);
  for (const char* key : {"fold", "nilpotent", "whitehead", "homology"}) CHECK(j.contains(key));
  const auto r4 = conjugation_witness(4);
  CHECK(r4.alpha == Word::parse("dcbaDDCCBBAA", 4));
  CHECK_FALSE(r4.surjective);
  CHECK(r4.not_separable_certified);
  CHECK_FALSE(r4.whitehead_minimal_length.has_value());
}
