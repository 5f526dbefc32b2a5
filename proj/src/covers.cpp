#include "freecover/covers.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>

#include "freecover/error.hpp"

namespace freecover {

namespace {

long checked_pow(long base, long exp, long limit) {
  long v = 1;
  for (long i = 0; i < exp; ++i) {
    if (v > limit / base) return -1;
    v *= base;
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteQuotient

FiniteQuotient::FiniteQuotient(int rank, std::vector<std::vector<int>> action, std::optional<int> exponent)
    : rank_(rank), action_(std::move(action)), exponent_(exponent) {
  if (rank < 2) throw InputError("quotient rank must be at least 2");
  if (static_cast<int>(action_.size()) != rank) throw InputError("need one permutation per generator");
  const std::size_t n = action_.front().size();
  if (n == 0) throw InputError("empty quotient");
  inverse_action_.assign(action_.size(), std::vector<int>(n, -1));
  for (std::size_t i = 0; i < action_.size(); ++i) {
    if (action_[i].size() != n) throw InputError("generator permutations differ in size");
    for (std::size_t g = 0; g < n; ++g) {
      const int h = action_[i][g];
      if (h < 0 || static_cast<std::size_t>(h) >= n || inverse_action_[i][static_cast<std::size_t>(h)] >= 0) {
        throw InputError("generator action is not a permutation");
      }
      inverse_action_[i][static_cast<std::size_t>(h)] = static_cast<int>(g);
    }
  }

  // Breadth-first spanning tree from the identity.
  reps_.assign(n, Word(rank));
  parent_.assign(n, {-1, 0});
  std::vector<bool> seen(n, false);
  seen[0] = true;
  std::deque<int> queue{0};
  std::size_t reached = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int i = 1; i <= rank; ++i) {
      std::pair<int, Letter> moves[2] = {{action_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(v)], i},
                                         {inverse_action_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(v)], -i}};
      if (moves[1].first < moves[0].first) std::swap(moves[0], moves[1]);
      for (const auto& [target, letter] : moves) {
        const auto t = static_cast<std::size_t>(target);
        if (seen[t]) continue;
        seen[t] = true;
        ++reached;
        parent_[t] = {v, letter};
        reps_[t] = reps_[static_cast<std::size_t>(v)] * Word(rank, {letter});
        queue.push_back(target);
      }
    }
  }
  if (reached != n) throw InputError("generator action is not transitive");
}

FiniteQuotient FiniteQuotient::from_regular_action(int rank, std::vector<std::vector<int>> action) {
  return FiniteQuotient(rank, std::move(action), std::nullopt);
}

FiniteQuotient FiniteQuotient::mod_q(int rank, int q) {
  if (q < 2) throw InputError("modulus q must be at least 2, got " + std::to_string(q));
  if (rank < 2) throw InputError("rank must be at least 2");
  const long order = checked_pow(q, rank, 1L << 30);
  if (order < 0) throw InputError("(Z/q)^n too large");
  std::vector<std::vector<int>> action(static_cast<std::size_t>(rank), std::vector<int>(static_cast<std::size_t>(order)));
  for (int i = 1; i <= rank; ++i) {
    const long place = checked_pow(q, rank - i, order);
    for (long g = 0; g < order; ++g) {
      const long digit = (g / place) % q;
      const long next = digit + 1 == q ? g - digit * place : g + place;
      action[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(g)] = static_cast<int>(next);
    }
  }
  return FiniteQuotient(rank, std::move(action), q);
}

FiniteQuotient FiniteQuotient::from_permutations(int rank, const std::vector<std::vector<int>>& perms) {
  if (static_cast<int>(perms.size()) != rank) throw InputError("need one permutation per generator");
  const std::size_t m = perms.front().size();
  std::vector<int> id(m);
  std::iota(id.begin(), id.end(), 0);
  std::map<std::vector<int>, int> index{{id, 0}};
  std::vector<std::vector<int>> elements{id};
  std::vector<std::vector<int>> action(static_cast<std::size_t>(rank));
  for (std::size_t e = 0; e < elements.size(); ++e) {
    for (int i = 0; i < rank; ++i) {
      const auto& p = perms[static_cast<std::size_t>(i)];
      if (p.size() != m) throw InputError("permutations differ in size");
      // Left-to-right product: apply the element, then the generator.
      std::vector<int> next(m);
      for (std::size_t x = 0; x < m; ++x) next[x] = p.at(static_cast<std::size_t>(elements[e][x]));
      auto [it, fresh] = index.try_emplace(next, static_cast<int>(elements.size()));
      if (fresh) elements.push_back(next);
      action[static_cast<std::size_t>(i)].push_back(it->second);
    }
  }
  return FiniteQuotient(rank, std::move(action), std::nullopt);
}

FiniteQuotient FiniteQuotient::trivial(int rank) {
  return FiniteQuotient(rank, std::vector<std::vector<int>>(static_cast<std::size_t>(rank), std::vector<int>{0}), 1);
}

FiniteQuotient mod_q_quotient(int rank, int q) { return FiniteQuotient::mod_q(rank, q); }

int FiniteQuotient::act(int g, Letter l) const {
  const int i = std::abs(l);
  if (i < 1 || i > rank_) throw InputError("letter out of range for quotient");
  const auto& table = l > 0 ? action_ : inverse_action_;
  return table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(g)];
}

int FiniteQuotient::act(int g, const Word& w) const {
  if (w.rank() != rank_) throw InputError("word rank does not match quotient rank");
  for (Letter l : w.letters()) g = act(g, l);
  return g;
}

int FiniteQuotient::element_order(int g) const {
  int k = 1;
  int p = g;
  while (p != identity()) {
    p = multiply(p, g);
    ++k;
  }
  return k;
}

std::vector<std::vector<int>> FiniteQuotient::multiplication_table() const {
  std::vector<std::vector<int>> table(static_cast<std::size_t>(order()));
  for (int g = 0; g < order(); ++g)
    for (int h = 0; h < order(); ++h) table[static_cast<std::size_t>(g)].push_back(multiply(g, h));
  return table;
}

bool FiniteQuotient::is_abelian() const {
  for (int i = 1; i <= rank_; ++i) {
    for (int j = i + 1; j <= rank_; ++j) {
      if (evaluate(commutator(Word::generator(rank_, i), Word::generator(rank_, j))) != identity()) return false;
    }
  }
  return true;
}

bool FiniteQuotient::validate() const {
  const int n = order();
  // Regularity: base -> v extends to a label-preserving automorphism for every v.
  for (int v = 0; v < n; ++v) {
    std::vector<int> image(static_cast<std::size_t>(n), -1);
    image[0] = v;
    std::deque<int> queue{0};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int i = 1; i <= rank_; ++i) {
        for (Letter l : {i, -i}) {
          const int w = act(u, l);
          const int expected = act(image[static_cast<std::size_t>(u)], l);
          if (image[static_cast<std::size_t>(w)] < 0) {
            image[static_cast<std::size_t>(w)] = expected;
            queue.push_back(w);
          } else if (image[static_cast<std::size_t>(w)] != expected) {
            return false;
          }
        }
      }
    }
  }
  const int sample = std::min(n, 16);
  for (int g = 0; g < n; ++g) {
    if (multiply(g, identity()) != g || multiply(identity(), g) != g) return false;
    if (multiply(g, inverse(g)) != identity()) return false;
  }
  for (int a = 0; a < sample; ++a)
    for (int b = 0; b < sample; ++b)
      for (int c = 0; c < sample; ++c)
        if (multiply(multiply(a, b), c) != multiply(a, multiply(b, c))) return false;
  return true;
}

std::string FiniteQuotient::label(int g) const {
  if (exponent_ && *exponent_ >= 2) {
    std::string digits(static_cast<std::size_t>(rank_), '0');
    long x = g;
    for (int i = rank_ - 1; i >= 0; --i) {
      const long d = x % *exponent_;
      digits[static_cast<std::size_t>(i)] = static_cast<char>(d < 10 ? '0' + d : 'a' + d - 10);
      x /= *exponent_;
    }
    return digits;
  }
  return representative(g).str();
}

int FiniteQuotient::parse_element(const std::string& text) const {
  if (exponent_ && *exponent_ >= 2 && *exponent_ <= 10 && static_cast<int>(text.size()) == rank_ &&
      std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    long g = 0;
    for (char c : text) {
      const int d = c - '0';
      if (d >= *exponent_) throw InputError("digit " + std::string(1, c) + " is not below q = " + std::to_string(*exponent_));
      g = g * *exponent_ + d;
    }
    return static_cast<int>(g);
  }
  return evaluate(Word::parse(text, rank_));
}

nlohmann::json FiniteQuotient::to_json() const {
  nlohmann::json j;
  j["rank"] = rank_;
  j["order"] = order();
  if (exponent_) j["exponent"] = *exponent_;
  std::vector<std::string> labels;
  std::vector<int> images;
  for (int g = 0; g < order(); ++g) labels.push_back(label(g));
  for (int i = 1; i <= rank_; ++i) images.push_back(generator_image(i));
  j["elements"] = labels;
  j["generator_images"] = images;
  j["right_action"] = action_;
  if (order() <= 512) j["table"] = multiplication_table();
  return j;
}

// ---------------------------------------------------------------------------

bool is_fully_characteristic_verbal(const FiniteQuotient& quotient) {
  const auto q = quotient.declared_exponent();
  if (!q) return false;
  if (!quotient.is_abelian()) return false;
  const int n = quotient.rank();
  for (int i = 1; i <= n; ++i) {
    if (quotient.evaluate(power(Word::generator(n, i), *q)) != FiniteQuotient::identity()) return false;
  }
  // Abelian, exponent | q and |Gamma| = q^n force Gamma = (Z/q)^n freely on
  // the images, i.e. ker Psi is exactly the verbal subgroup.
  return checked_pow(*q, n, 1L << 40) == quotient.order();
}

bool is_invariant_under(const Endomorphism& phi, const FiniteQuotient& quotient) {
  if (phi.rank() != quotient.rank()) throw InputError("endomorphism rank does not match quotient rank");
  const int n = quotient.rank();
  std::vector<int> images;
  for (int i = 1; i <= n; ++i) images.push_back(quotient.evaluate(phi.image(i)));
  // f(g) := Psi(phi(rep g)) is well defined on Gamma iff f(g x_i) = f(g) Psi(phi(x_i)).
  std::vector<int> f(static_cast<std::size_t>(quotient.order()));
  for (int g = 0; g < quotient.order(); ++g) f[static_cast<std::size_t>(g)] = quotient.evaluate(phi.apply(quotient.representative(g)));
  for (int g = 0; g < quotient.order(); ++g) {
    for (int i = 1; i <= n; ++i) {
      const int lhs = f[static_cast<std::size_t>(quotient.act(g, i))];
      const int rhs = quotient.multiply(f[static_cast<std::size_t>(g)], images[static_cast<std::size_t>(i - 1)]);
      if (lhs != rhs) return false;
    }
  }
  return true;
}

bool is_characteristic_nielsen(const FiniteQuotient& quotient) {
  const auto gens = nielsen::generating_set(quotient.rank());
  return std::all_of(gens.begin(), gens.end(), [&](const Endomorphism& a) { return is_invariant_under(a, quotient); });
}

std::string to_string(InducedKind kind) {
  switch (kind) {
    case InducedKind::kIdentity: return "identity";
    case InducedKind::kAutomorphism: return "automorphism";
    case InducedKind::kProperEndomorphism: return "proper";
  }
  return "unknown";
}

InducedEndo induced_quotient_endo(const Endomorphism& phi, const FiniteQuotient& quotient) {
  if (!is_invariant_under(phi, quotient)) {
    throw PreconditionError("induced map on the quotient is ill defined: ker Psi is not invariant under " + phi.str());
  }
  InducedEndo out;
  for (int g = 0; g < quotient.order(); ++g) out.map.push_back(quotient.evaluate(phi.apply(quotient.representative(g))));
  bool identity = true;
  for (int g = 0; g < quotient.order(); ++g) identity = identity && out.map[static_cast<std::size_t>(g)] == g;
  std::vector<int> sorted = out.map;
  std::sort(sorted.begin(), sorted.end());
  const bool bijective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  out.kind = identity ? InducedKind::kIdentity
                      : (bijective ? InducedKind::kAutomorphism : InducedKind::kProperEndomorphism);
  return out;
}

// ---------------------------------------------------------------------------
// BasedCover

namespace {

LabeledGraph cover_graph(const FiniteQuotient& q) {
  std::vector<LabeledEdge> edges;
  for (int g = 0; g < q.order(); ++g)
    for (int i = 1; i <= q.rank(); ++i) edges.push_back({g, q.act(g, i), i});
  return LabeledGraph(q.rank(), q.order(), std::move(edges), 0);
}

}  // namespace

BasedCover::BasedCover(FiniteQuotient quotient)
    : quotient_(std::move(quotient)), graph_(cover_graph(quotient_)) {
  const int n = quotient_.rank();
  cycle_position_.assign(graph_.edge_count(), -1);
  std::vector<bool> is_tree(graph_.edge_count(), false);
  for (int g = 1; g < quotient_.order(); ++g) {
    const auto [p, l] = quotient_.tree_parent(g);
    const int e = l > 0 ? edge_index(p, l) : edge_index(g, -l);
    is_tree[static_cast<std::size_t>(e)] = true;
    tree_edges_.push_back(e);
  }
  std::sort(tree_edges_.begin(), tree_edges_.end());
  for (int g = 0; g < quotient_.order(); ++g) {
    for (int i = 1; i <= n; ++i) {
      const int e = edge_index(g, i);
      if (is_tree[static_cast<std::size_t>(e)]) continue;
      cycle_position_[static_cast<std::size_t>(e)] = static_cast<int>(cycle_basis_.size());
      const Word loop = quotient_.representative(g) * Word(n, {i}) * invert(quotient_.representative(quotient_.act(g, i)));
      cycle_basis_.push_back({e, loop});
    }
  }
}

nlohmann::json BasedCover::to_json() const {
  nlohmann::json j;
  j["quotient"] = quotient_.to_json();
  j["graph"] = graph_.to_json();
  j["degree"] = degree();
  j["rank"] = rank();
  j["tree_edges"] = tree_edges_;
  auto basis = nlohmann::json::array();
  for (const auto& c : cycle_basis_) basis.push_back({{"edge", c.edge}, {"loop", c.loop.str()}});
  j["cycle_basis"] = basis;
  return j;
}

BasedCover build_cover(const FiniteQuotient& quotient) { return BasedCover(quotient); }

// ---------------------------------------------------------------------------
// CoverTower

CoverTower::CoverTower(int rank, int q, int max_vertices) : rank_(rank), q_(q), max_vertices_(max_vertices) {
  if (q < 2) throw InputError("modulus q must be at least 2");
  if (rank < 2) throw InputError("rank must be at least 2");
  if (max_vertices < 1) throw InputError("vertex budget must be positive");
}

long CoverTower::total_degree(int k) const {
  if (k == 0) return 1;
  return level(k).cover.degree();
}

std::optional<long> CoverTower::next_level_vertices() const {
  constexpr long kLimit = 1L << 40;
  if (levels_.empty()) {
    const long v = checked_pow(q_, rank_, kLimit);
    return v < 0 ? std::nullopt : std::optional<long>(v);
  }
  const auto& top = levels_.back().cover;
  const long fiber = checked_pow(q_, top.rank(), kLimit);
  if (fiber < 0 || top.degree() > kLimit / fiber) return std::nullopt;
  return fiber * top.degree();
}

const TowerLevel& CoverTower::extend() {
  const int next = depth() + 1;
  const auto vertices = next_level_vertices();
  if (!vertices || *vertices > max_vertices_) {
    throw BudgetExceeded("tower level " + std::to_string(next) + " needs " +
                             (vertices ? std::to_string(*vertices) : std::string("more than 2^40")) +
                             " vertices, over the budget of " + std::to_string(max_vertices_),
                         depth());
  }
  if (levels_.empty()) {
    levels_.push_back({BasedCover(mod_q_quotient(rank_, q_)), static_cast<long>(*vertices), Word::generator(rank_, 1)});
    return levels_.back();
  }
  // Homology cover of X_k: vertices (v, c), c in (Z/q)^r; crossing the j-th
  // non-tree edge adds e_j to c.
  const BasedCover& below = levels_.back().cover;
  const int r = below.rank();
  const long fiber = *vertices / below.degree();
  std::vector<long> place(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) place[static_cast<std::size_t>(j)] = checked_pow(q_, r - 1 - j, fiber);
  std::vector<std::vector<int>> action(static_cast<std::size_t>(rank_), std::vector<int>(static_cast<std::size_t>(*vertices)));
  for (int v = 0; v < below.degree(); ++v) {
    for (int i = 1; i <= rank_; ++i) {
      const int e = below.edge_index(v, i);
      const int target = below.quotient().act(v, i);
      const int j = below.cycle_position(e);
      for (long c = 0; c < fiber; ++c) {
        long c2 = c;
        if (j >= 0) {
          const long p = place[static_cast<std::size_t>(j)];
          const long digit = (c / p) % q_;
          c2 = digit + 1 == q_ ? c - digit * p : c + p;
        }
        action[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(v * fiber + c)] = static_cast<int>(target * fiber + c2);
      }
    }
  }
  Word witness = below.cycle_basis().front().loop;
  levels_.push_back({BasedCover(FiniteQuotient::from_regular_action(rank_, std::move(action))), fiber, std::move(witness)});
  return levels_.back();
}

bool CoverTower::validate_descent() const {
  for (int k = 1; k <= depth(); ++k) {
    const Word& w = level(k).descent_witness;
    const bool in_previous = k == 1 || level(k - 1).cover.contains(w);
    if (!in_previous || level(k).cover.contains(w)) return false;
  }
  return true;
}

nlohmann::json CoverTower::to_json() const {
  nlohmann::json j;
  j["rank"] = rank_;
  j["q"] = q_;
  j["max_vertices"] = max_vertices_;
  auto levels = nlohmann::json::array();
  for (int k = 1; k <= depth(); ++k) {
    const auto& lv = level(k);
    levels.push_back({{"level", k},
                      {"total_degree", lv.cover.degree()},
                      {"relative_degree", lv.relative_degree},
                      {"rank", lv.cover.rank()},
                      {"edges", lv.cover.graph().edge_count()},
                      {"descent_witness", lv.descent_witness.str()}});
  }
  j["levels"] = levels;
  return j;
}

CoverTower build_tower(int rank, int q, int depth, int max_vertices) {
  if (depth < 1) throw InputError("tower depth must be at least 1");
  CoverTower tower(rank, q, max_vertices);
  for (int k = 0; k < depth; ++k) tower.extend();
  return tower;
}

Separation separate_word(const Word& w, int q, int max_depth, int max_vertices) {
  if (w.empty()) throw InputError("cannot separate the trivial word");
  CoverTower tower(w.rank(), q, max_vertices);
  Separation result;
  for (int k = 1; k <= max_depth; ++k) {
    try {
      tower.extend();
    } catch (const BudgetExceeded&) {
      result.budget_exhausted = true;
      return result;
    }
    result.levels_examined = k;
    if (!tower.level(k).cover.contains(w)) {
      result.level = k;
      return result;
    }
  }
  return result;
}

}  // namespace freecover
