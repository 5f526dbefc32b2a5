#include <doctest.h>

#include <algorithm>

#include "freecover/error.hpp"
#include "freecover/nilpotent.hpp"
#include "freecover/whitehead.hpp"

using namespace freecover;

namespace {
Word W(const char* s, int n = 2) { return Word::parse(s, n); }
using Edge = std::pair<int, int>;
Edge E(Letter a, Letter b) {
  const int u = whitehead_vertex(a), v = whitehead_vertex(b);
  return {std::min(u, v), std::max(u, v)};
}
}  // namespace

TEST_CASE("vertex numbering") {
  CHECK(whitehead_vertex(1) == 0);
  CHECK(whitehead_vertex(-1) == 1);
  CHECK(whitehead_vertex(2) == 2);
  CHECK(whitehead_letter(3) == -2);
  CHECK(whitehead_vertex_label(3) == "x2^-1");
}

TEST_CASE("whitehead_graph") {
  auto g = whitehead_graph(W("ab"));
  CHECK(g.edges == std::vector<Edge>{E(1, -2), E(2, -1)});
  g = whitehead_graph(W("aa"));
  CHECK(g.edges == std::vector<Edge>{E(1, -1), E(1, -1)});
  g = whitehead_graph(witness_alpha(2));
  CHECK(g.edges.size() == 6);
  // Conjugates share the graph of their cyclic reduction.
  CHECK(whitehead_graph(W("Babb")).edges.size() == 2);
  CHECK_THROWS_AS(whitehead_graph(W("abBA")), InputError);
}

TEST_CASE("connectivity and cut vertices") {
  auto c = is_connected_no_cut_vertex(whitehead_graph(witness_alpha(2)));
  CHECK(c.connected);
  CHECK(c.cut_vertices.empty());
  c = is_connected_no_cut_vertex(whitehead_graph(W("ab")));
  CHECK_FALSE(c.connected);
  CHECK(c.cut_vertices.empty());
  c = is_connected_no_cut_vertex(whitehead_graph(witness_alpha(4)));
  CHECK(c.connected);
  CHECK(c.cut_vertices.empty());
  // x1: one edge, both x2 vertices isolated.
  c = is_connected_no_cut_vertex(whitehead_graph(W("a")));
  CHECK_FALSE(c.connected);
  CHECK(c.connected_occurring);
  CHECK(c.isolated == std::vector<int>{2, 3});
  // a path x1 - x2^-1 - x2 ... has a cut vertex
  c = is_connected_no_cut_vertex(whitehead_graph(W("abb")));
  CHECK(c.connected);
  CHECK_FALSE(c.cut_vertices.empty());
}

TEST_CASE("separability certificate") {
  const auto phi = conjugating_endomorphism(witness_alpha(2));
  CHECK(is_separable_certified_negative(phi.apply(W("ab"))));
  CHECK_FALSE(is_separable_certified_negative(W("a")));
  CHECK_FALSE(is_separable_certified_negative(W("ab")));
  const bool commutator_certified = is_separable_certified_negative(W("ABab"));
  if (commutator_certified) CHECK(whitehead_reduce(W("ABab")).minimal_length > 1);
  const std::string dot = to_dot(whitehead_graph(W("ab")));
  CHECK(dot.find("\"x1\" -- \"x2^-1\"") != std::string::npos);
}

TEST_CASE("whitehead_reduce") {
  CHECK(whitehead_reduce(W("ab")).minimal_length == 1);
  CHECK(whitehead_reduce(W("aabb")).minimal_length == 4);
  CHECK(whitehead_reduce(W("abaab")).minimal_length == 1);
  CHECK(whitehead_reduce(W("ABab")).minimal_length == 4);
  const auto phi = conjugating_endomorphism(witness_alpha(2));
  CHECK(whitehead_reduce(phi.apply(W("ab"))).minimal_length > 1);
  CHECK_THROWS_AS(whitehead_reduce(Word::parse("abcd", 4)), BudgetExceeded);
  CHECK_THROWS_AS(whitehead_reduce(power(W("ab"), 11)), BudgetExceeded);
  CHECK(whitehead_reduce(power(W("ab"), 11), {3, 30}).minimal_length == 11);
  const auto m = whitehead_automorphism(2, 1, 1u << whitehead_vertex(2));
  CHECK(m.image(2) == W("ba"));
  CHECK(m.image(1) == W("a"));
}
