#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>

#include "freecover/error.hpp"
#include "freecover/homology.hpp"
#include "freecover/nilpotent.hpp"
#include "freecover/stallings.hpp"
#include "freecover/surfaces.hpp"
#include "freecover/whitehead.hpp"
#include "support.hpp"

using namespace freecover;
using namespace freecover::testing;

namespace {

std::mt19937_64 make_rng(std::uint64_t salt) {
  std::uint64_t seed = 20240611;
  if (const char* env = std::getenv("FREECOVER_SEED")) seed = std::strtoull(env, nullptr, 10);
  return std::mt19937_64(seed ^ (salt * 0x9e3779b97f4a7c15ULL));
}

Word W(const char* s, int n = 2) { return Word::parse(s, n); }

// Petals of the generators with shuffled vertex ids and edge order.
LabeledGraph scrambled_petals(std::mt19937_64& rng, int rank, const std::vector<Word>& gens) {
  std::vector<LabeledEdge> edges;
  int vertices = 1;
  for (const auto& g : gens) {
    int prev = 0;
    for (std::size_t i = 0; i < g.length(); ++i) {
      const int next = i + 1 == g.length() ? 0 : vertices++;
      const Letter l = g.letters()[i];
      if (l > 0) edges.push_back({prev, next, l});
      else edges.push_back({next, prev, -l});
      prev = next;
    }
  }
  std::vector<int> perm(static_cast<std::size_t>(vertices));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& e : edges) {
    e.source = perm[static_cast<std::size_t>(e.source)];
    e.target = perm[static_cast<std::size_t>(e.target)];
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  return LabeledGraph(rank, vertices, edges, perm[0]);
}

// H_1 class of a closed walk from vertex 0 of a cover graph: signed counts of
// non-tree edges, tree by BFS. Independent of the covers module.
struct GraphHomology {
  const LabeledGraph& g;
  std::vector<int> column;  // edge -> cycle coordinate, -1 on the tree
  int rank = 0;

  explicit GraphHomology(const LabeledGraph& graph) : g(graph), column(graph.edge_count(), -1) {
    std::vector<bool> seen(static_cast<std::size_t>(g.vertex_count()), false);
    std::vector<bool> tree(g.edge_count(), false);
    std::vector<int> queue{*g.basepoint()};
    seen[static_cast<std::size_t>(*g.basepoint())] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edges()[e];
        int other = -1;
        if (ed.source == queue[head]) other = ed.target;
        else if (ed.target == queue[head]) other = ed.source;
        if (other < 0 || seen[static_cast<std::size_t>(other)]) continue;
        seen[static_cast<std::size_t>(other)] = true;
        tree[e] = true;
        queue.push_back(other);
      }
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      if (!tree[e]) column[e] = rank++;
  }

  IntVector walk(const Word& w) const {
    IntVector v(static_cast<std::size_t>(rank));
    int at = *g.basepoint();
    for (Letter l : w.letters()) {
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edges()[e];
        if (ed.label != std::abs(l)) continue;
        if (l > 0 && ed.source == at) {
          if (column[e] >= 0) v[static_cast<std::size_t>(column[e])] += 1;
          at = ed.target;
          break;
        }
        if (l < 0 && ed.target == at) {
          if (column[e] >= 0) v[static_cast<std::size_t>(column[e])] -= 1;
          at = ed.source;
          break;
        }
      }
    }
    return v;
  }
};

std::vector<int> random_permutation(std::mt19937_64& rng, int points) {
  std::vector<int> p(static_cast<std::size_t>(points));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

std::vector<FiniteQuotient> sample_quotients() {
  std::vector<FiniteQuotient> out{mod_q_quotient(2, 2), mod_q_quotient(2, 3), mod_q_quotient(3, 2),
                                  mod_q_quotient(2, 4),
                                  FiniteQuotient::from_permutations(2, {{1, 0, 2}, {0, 2, 1}}),
                                  FiniteQuotient::from_permutations(2, {{1, 2, 3, 0}, {1, 0, 2, 3}})};
  return out;
}

bool is_rotation_of_power(const Word& w, const std::vector<Word>& bases) {
  for (const auto& b : bases) {
    if (b.length() == 0 || w.length() % b.length() != 0) continue;
    const auto& ls = w.letters();
    const auto& bs = b.letters();
    for (std::size_t shift = 0; shift < bs.size(); ++shift) {
      bool ok = true;
      for (std::size_t i = 0; i < ls.size() && ok; ++i) ok = ls[i] == bs[(i + shift) % bs.size()];
      if (ok) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("free reduction is confluent") {
  auto rng = make_rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const int rank = 2 + trial % 3;
    const Word w = random_word_upto(rng, rank, 0, 12);
    std::vector<Letter> raw = w.letters();
    std::uniform_int_distribution<int> letter(1, rank);
    for (int k = 0; k < 6; ++k) {
      std::uniform_int_distribution<std::size_t> at(0, raw.size());
      const Letter l = letter(rng) * (rng() % 2 ? 1 : -1);
      const auto pos = static_cast<long>(at(rng));
      raw.insert(raw.begin() + pos, {l, -l});
    }
    CHECK(free_reduce(rank, raw) == w.letters());
    CHECK(naive_reduce(raw) == w.letters());
    CHECK(Word(rank, raw) == w);
  }
}

TEST_CASE("endomorphisms act as homomorphisms") {
  auto rng = make_rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int rank = 2 + trial % 2;
    const auto phi = random_endomorphism(rng, rank, 5);
    const Word u = random_word_upto(rng, rank, 0, 8);
    const Word v = random_word_upto(rng, rank, 0, 8);
    std::vector<Letter> naive;
    for (Letter l : u.letters()) {
      const Word img = l > 0 ? phi.image(l) : invert(phi.image(-l));
      naive.insert(naive.end(), img.letters().begin(), img.letters().end());
    }
    CHECK(phi.apply(u).letters() == naive_reduce(naive));
    CHECK(phi.apply(u * v) == phi.apply(u) * phi.apply(v));
    CHECK(commutator(u, v) * commutator(v, u) == Word(rank));
  }
}

TEST_CASE("composition is associative with a neutral identity") {
  auto rng = make_rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_endomorphism(rng, 2, 4);
    const auto b = random_endomorphism(rng, 2, 4);
    const auto c = random_endomorphism(rng, 2, 4);
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
    CHECK(compose(Endomorphism::identity(2), a) == a);
    CHECK(compose(a, Endomorphism::identity(2)) == a);
    const Word w = random_word_upto(rng, 2, 0, 6);
    CHECK(compose(a, b).apply(w) == a.apply(b.apply(w)));
  }
}

TEST_CASE("folding does not depend on the fold order") {
  auto rng = make_rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int rank = 2 + trial % 2;
    std::vector<Word> gens;
    const int count = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < count; ++i) gens.push_back(random_word_upto(rng, rank, 1, 6));
    const auto expected = graph_from_generators(rank, gens).canonical();
    for (int k = 0; k < 3; ++k) CHECK(core(fold(scrambled_petals(rng, rank, gens))).canonical() == expected);
  }
}

TEST_CASE("membership agrees with brute force") {
  auto rng = make_rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<Word> gens{random_word_upto(rng, 2, 1, 4), random_word_upto(rng, 2, 1, 4)};
    const auto g = graph_from_generators(2, gens);
    const auto products = products_within(gens, 12);
    for (int k = 0; k < 40; ++k) {
      const Word w = random_word_upto(rng, 2, 0, 6);
      const bool enumerated = products.contains(w.letters());
      if (enumerated) CHECK(contains(g, w));
      if (contains(g, w)) CHECK_MESSAGE(enumerated, (gens[0].str() + " " + gens[1].str() + " : " + w.str()));
    }
    for (const auto& p : products)
      if (p.size() <= 6) CHECK(contains(g, Word(2, p)));
  }
}

TEST_CASE("completion to a cover") {
  auto rng = make_rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    const int rank = 2 + trial % 2;
    std::vector<Word> gens;
    for (int i = 0; i < 2; ++i) gens.push_back(random_word_upto(rng, rank, 1, 5));
    const auto g = graph_from_generators(rank, gens);
    const auto c = complete_to_cover(g);
    CHECK(c.is_cover());
    CHECK(c.is_folded());
    CHECK(c.is_connected());
    CHECK(freecover::rank(c) == c.vertex_count() * (rank - 1) + 1);
    for (const auto& w : gens) CHECK(contains(c, w));
    // H_1(G) -> H_1(cover) is injective: the generators' classes span rank(G).
    const GraphHomology h(c);
    std::vector<IntVector> cols;
    for (const auto& w : gens) cols.push_back(h.walk(w));
    const auto snf = smith_normal_form(IntMatrix::from_columns(cols, static_cast<std::size_t>(h.rank)));
    CHECK(static_cast<int>(snf.rank()) == freecover::rank(g));
  }
}

TEST_CASE("Nielsen-Schreier rank and deck action") {
  auto rng = make_rng(7);
  auto quotients = sample_quotients();
  for (int k = 0; k < 6; ++k)
    quotients.push_back(FiniteQuotient::from_permutations(2, {random_permutation(rng, 4), random_permutation(rng, 4)}));
  for (const auto& q : quotients) {
    CHECK(q.validate());
    const auto x = build_cover(q);
    const int n = q.rank();
    CHECK(x.rank() == x.degree() * (n - 1) + 1);
    CHECK(x.graph().is_cover());
    CHECK(freecover::rank(x.graph()) == x.rank());
    for (int g = 0; g < q.order(); ++g) {
      std::vector<int> image;
      for (int h = 0; h < q.order(); ++h) image.push_back(q.multiply(g, h));
      std::vector<int> sorted = image;
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> all(static_cast<std::size_t>(q.order()));
      std::iota(all.begin(), all.end(), 0);
      CHECK(sorted == all);
      if (g != FiniteQuotient::identity())
        for (int h = 0; h < q.order(); ++h) CHECK(image[static_cast<std::size_t>(h)] != h);
    }
    for (const auto& c : x.cycle_basis()) CHECK(x.contains(c.loop));
  }
}

TEST_CASE("tower descent and index multiplicativity") {
  for (int q : {2, 3}) {
    CoverTower t(2, q);
    t.extend();
    if (q == 2) t.extend();
    CHECK(t.validate_descent());
    long product = 1;
    for (int k = 1; k <= t.depth(); ++k) {
      product *= t.level(k).relative_degree;
      CHECK(t.total_degree(k) == product);
      CHECK(t.level(k).cover.degree() == product);
      const Word& w = t.level(k).descent_witness;
      CHECK_FALSE(t.level(k).cover.contains(w));
      if (k > 1) CHECK(t.level(k - 1).cover.contains(w));
    }
  }
}

TEST_CASE("induced quotient maps are functorial") {
  auto rng = make_rng(8);
  const auto quotients = std::vector<FiniteQuotient>{mod_q_quotient(2, 2), mod_q_quotient(2, 3), mod_q_quotient(3, 2)};
  for (int trial = 0; trial < 90; ++trial) {
    const auto& q = quotients[static_cast<std::size_t>(trial % 3)];
    const auto phi = random_endomorphism(rng, q.rank(), 5);
    const auto psi = random_endomorphism(rng, q.rank(), 5);
    const auto a = induced_quotient_endo(phi, q);
    const auto b = induced_quotient_endo(psi, q);
    const auto ab = induced_quotient_endo(compose(phi, psi), q);
    for (int g = 0; g < q.order(); ++g)
      CHECK(ab.map[static_cast<std::size_t>(g)] == a.map[static_cast<std::size_t>(b.map[static_cast<std::size_t>(g)])]);
    const auto x = build_cover(q);
    CHECK(lift_matrix(compose(phi, psi), x) == lift_matrix(phi, x) * lift_matrix(psi, x));
  }
}

TEST_CASE("deck representation, trace law and faithfulness") {
  for (const auto& q : sample_quotients()) {
    const auto x = build_cover(q);
    std::vector<IntMatrix> m;
    for (int g = 0; g < q.order(); ++g) m.push_back(deck_matrix(x, g));
    CHECK(m[0].trace() == x.rank());
    for (int g = 1; g < q.order(); ++g) {
      CHECK(m[static_cast<std::size_t>(g)].trace() == 1);
      CHECK_FALSE(m[static_cast<std::size_t>(g)].is_identity());
    }
    for (int g = 0; g < q.order(); ++g)
      for (int h = 0; h < q.order(); ++h)
        CHECK(m[static_cast<std::size_t>(q.multiply(g, h))] == m[static_cast<std::size_t>(g)] * m[static_cast<std::size_t>(h)]);
  }
}

TEST_CASE("automorphisms moving the quotient move homology") {
  auto rng = make_rng(9);
  const auto q = mod_q_quotient(2, 3);
  const auto x = build_cover(q);
  int nontrivial = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto psi = random_automorphism(rng, 2, 6);
    const auto induced = induced_quotient_endo(psi, q);
    if (induced.kind == InducedKind::kIdentity) continue;
    ++nontrivial;
    CHECK_FALSE(lift_matrix(psi, x).is_identity());
    CHECK_FALSE(equivariance_check(psi, x));
  }
  CHECK(nontrivial > 0);
}

TEST_CASE("certificates agree with the fold oracle") {
  auto rng = make_rng(10);
  SearchOptions small;
  small.depth = 1;
  for (int trial = 0; trial < 40; ++trial) {
    const auto phi = random_endomorphism(rng, 2, 4);
    const auto s = find_nonsurjectivity_certificate(phi, small);
    if (is_surjective(phi)) {
      CHECK_FALSE(s.certificate.has_value());
      for (const auto& c : s.searched) CHECK(c.epi);
    }
    if (s.certificate) CHECK_FALSE(is_surjective(phi));
  }
}

TEST_CASE("Smith normal form") {
  auto rng = make_rng(11);
  std::uniform_int_distribution<long> entry(-9, 9);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    std::vector<std::vector<long>> rows(r, std::vector<long>(c));
    for (auto& row : rows)
      for (auto& v : row) v = trial % 4 == 0 ? entry(rng) % 2 : entry(rng);
    const auto m = IntMatrix::from_rows(rows);
    const auto s = smith_normal_form(m);
    CHECK(s.U * m * s.V == s.D);
    CHECK(abs(s.U.determinant()) == 1);
    CHECK(abs(s.V.determinant()) == 1);
    CHECK(s.U * s.U_inverse == IntMatrix::identity(r));
    CHECK(s.V * s.V_inverse == IntMatrix::identity(c));
    const auto d = s.diagonal();
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(d[i] >= 0);
      if (i + 1 < d.size() && d[i] != 0) CHECK(d[i + 1] % d[i] == 0);
      if (d[i] == 0)
        for (std::size_t j = i; j < d.size(); ++j) CHECK(d[j] == 0);
    }
  }
}

TEST_CASE("Magnus expansion is a homomorphism") {
  auto rng = make_rng(12);
  for (int trial = 0; trial < 120; ++trial) {
    const int rank = 2 + trial % 2;
    const int cap = 1 + trial % 5;
    const Word u = random_word_upto(rng, rank, 0, 7);
    const Word v = random_word_upto(rng, rank, 0, 7);
    CHECK(magnus(u * v, cap) == magnus(u, cap) * magnus(v, cap));
    CHECK((magnus(invert(u), cap) * magnus(u, cap)).is_one());
    if (cap <= 4) {
      const auto oracle = symbolic_magnus(u, cap);
      const auto ours = magnus(u, cap);
      CHECK(oracle.size() == ours.coefficients().size());
      for (const auto& [m, c] : ours.coefficients()) {
        std::string key;
        for (int i : m) key += static_cast<char>('0' + i);
        CHECK(c == Integer(static_cast<long>(oracle.at(key))));
      }
    }
  }
}

TEST_CASE("commutator identities modulo the next layer") {
  auto rng = make_rng(13);
  for (int k = 1; k <= 3; ++k) {
    for (const auto& f : left_normed_commutators(2, k)) {
      for (int trial = 0; trial < 10; ++trial) {
        const Word x = random_word_upto(rng, 2, 0, 3);
        const Word y = random_word_upto(rng, 2, 0, 3);
        CHECK(congruent_mod_lcs(commutator(f, x * y), commutator(f, y) * commutator(f, x), k + 1));
        CHECK(congruent_mod_lcs(commutator(f, y * x * invert(y)), commutator(f, x), k + 1));
      }
    }
  }
}

TEST_CASE("congruence at k = 1 is equality in the abelianization") {
  auto rng = make_rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const Word u = random_word_upto(rng, 2, 0, 6);
    Word v = random_word_upto(rng, 2, 0, 6);
    if (trial % 3 == 0) {
      auto ls = u.letters();
      std::shuffle(ls.begin(), ls.end(), rng);
      v = Word(2, ls);
    }
    CHECK(congruent_mod_lcs(u, v, 1) == (abelianize(u) == abelianize(v)));
  }
}

TEST_CASE("congruence agrees with commutator subgroups") {
  // Weight-(k+1) commutators of short words generate a subgroup of F^(k+1);
  // Stallings membership in it is the brute-force side.
  std::vector<Word> words;
  for (int len = 0; len <= 3; ++len) {
    std::vector<Letter> ls(static_cast<std::size_t>(len), 1);
    std::function<void(std::size_t)> fill = [&](std::size_t i) {
      if (i == ls.size()) {
        const Word w(2, ls);
        if (w.length() == ls.size()) words.push_back(w);
        return;
      }
      for (Letter l : {1, -1, 2, -2}) {
        ls[i] = l;
        fill(i + 1);
      }
    };
    fill(0);
  }
  std::vector<Word> weight2, weight3;
  for (const auto& a : words)
    for (const auto& b : words)
      if (const Word c = commutator(a, b); !c.empty()) weight2.push_back(c);
  for (const auto& c : left_normed_commutators(2, 2))
    for (const auto& a : words)
      for (const auto& b : words)
        if (a.length() <= 2) weight3.push_back(commutator(a * c * invert(a), b));
  const auto f2 = graph_from_generators(2, weight2);
  const auto f3 = graph_from_generators(2, weight3);

  auto rng = make_rng(15);
  int positive = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + trial % 2;
    const Word u = random_word_upto(rng, 2, 0, 5);
    Word v = random_word_upto(rng, 2, 0, 5);
    if (trial % 3 == 0) v = weight2[rng() % weight2.size()] * u;
    if (trial % 3 == 1 && k == 2) v = weight3[rng() % weight3.size()] * u;
    const bool member = contains(k == 1 ? f2 : f3, u * invert(v));
    const bool congruent = congruent_mod_lcs(u, v, k);
    CHECK(congruent == member);
    positive += congruent ? 1 : 0;
  }
  CHECK(positive > 0);
}

TEST_CASE("Whitehead graphs") {
  auto rng = make_rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    const int rank = 2 + trial % 2;
    const Word w = random_word_upto(rng, rank, 1, 12);
    const auto cr = cyclic_reduce(w);
    if (cr.core.empty()) continue;
    CHECK(whitehead_graph(w).edges.size() == cr.core.length());
    if (is_separable_certified_negative(w) && cr.core.length() <= 20)
      CHECK(whitehead_reduce(w).minimal_length > 1);
  }
}

TEST_CASE("automorphisms preserve primitivity") {
  auto rng = make_rng(17);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int rank = 2 + trial % 2;
    const auto psi = random_automorphism(rng, rank, 5);
    const Word p = psi.apply(Word::generator(rank, 1 + static_cast<int>(rng() % static_cast<unsigned>(rank))));
    const Word core = cyclic_reduce(p).core;
    if (core.length() > 20) continue;
    ++checked;
    CHECK(whitehead_reduce(p).minimal_length == 1);
    CHECK_FALSE(is_separable_certified_negative(p));
  }
  CHECK(checked > 50);
}

TEST_CASE("Whitehead graph of alpha sits inside the test word's graph") {
  for (int n = 2; n <= 4; ++n) {
    for (bool variant : {false, true}) {
      const Word alpha = variant ? witness_alpha_variant(n) : witness_alpha(n);
      const auto phi = conjugating_endomorphism(alpha);
      const Word test = phi.apply(Word::generator(n, 1) * Word::generator(n, 2));
      auto big = whitehead_graph(test).edges;
      std::sort(big.begin(), big.end());
      for (const auto& e : whitehead_graph(alpha).edges) CHECK(std::binary_search(big.begin(), big.end(), e));
    }
  }
}

TEST_CASE("ribbon covers") {
  for (const char* rotation : {"a b A B", "a A b B", "a b A B c C", "a b c A B C"}) {
    const auto base = RibbonStructure::parse(rotation);
    for (const auto& rc : ribbon_family(base, {2, 3}, 1)) {
      CHECK(rc.euler_characteristic() == static_cast<long>(rc.cover().degree()) * base.euler_characteristic());
      for (const auto& w : rc.boundary_walks()) CHECK(is_rotation_of_power(w.word, base.boundary_words()));
      const auto& omega = rc.graph_pairing();
      CHECK((omega * rc.boundary_classes()).is_zero());
      CHECK((rc.boundary_classes().transpose() * omega).is_zero());
      for (int g = 0; g < rc.cover().degree(); ++g) {
        const auto m = deck_matrix(rc.cover(), g);
        CHECK(m.transpose() * omega * m == omega);
      }
      const auto v = elevations(Word::generator(base.rank(), 1), rc);
      CHECK(is_isotropic(v, rc));
      std::vector<IntVector> moved = v.basis;
      for (int g = 0; g < rc.cover().degree(); ++g) {
        const auto d = rc.closed_map(deck_matrix(rc.cover(), g));
        REQUIRE(d.has_value());
        for (const auto& b : v.basis) moved.push_back(*d * b);
      }
      CHECK(hermite_basis(moved, static_cast<std::size_t>(rc.closed_rank())) == v.basis);
    }
  }
}
