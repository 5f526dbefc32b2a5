#pragma once

// Finite quotients Gamma = F_n / pi_1(X), the based regular covers they
// define, iterated mod-q homology covers and induced maps on Gamma.

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "freecover/stallings.hpp"
#include "freecover/word.hpp"

namespace freecover {

/// A finite group Gamma with an epimorphism Psi: F_n -> Gamma.
///
/// Elements are 0..order-1 with the identity at 0. The group is stored as its
/// right regular action g -> g * Psi(x_i), which is exactly the cover graph;
/// products are evaluated by reading representative words. Representatives
/// are the spanning-tree words of the breadth-first search from the identity
/// that explores, per label ascending, the two neighbours g*x_i and
/// g*x_i^-1 by ascending element id.
class FiniteQuotient {
 public:
  /// `action[i][g]` = g * Psi(x_{i+1}). The action must be transitive and each
  /// row a permutation. Regularity is checked by validate().
  static FiniteQuotient from_regular_action(int rank, std::vector<std::vector<int>> action);
  /// (Z/q)^n; see mod_q_quotient.
  static FiniteQuotient mod_q(int rank, int q);
  /// Gamma generated by the permutations `perms` of {0..m-1}, Psi(x_i) = perms[i].
  static FiniteQuotient from_permutations(int rank, const std::vector<std::vector<int>>& perms);
  static FiniteQuotient trivial(int rank);

  int rank() const noexcept { return rank_; }
  int order() const noexcept { return static_cast<int>(reps_.size()); }
  static constexpr int identity() noexcept { return 0; }
  /// The modulus q when Gamma was built as (Z/q)^n.
  std::optional<int> declared_exponent() const noexcept { return exponent_; }

  int generator_image(int index) const { return act(identity(), index); }
  int act(int g, Letter l) const;
  int act(int g, const Word& w) const;
  /// Psi(w).
  int evaluate(const Word& w) const { return act(identity(), w); }
  int multiply(int g, int h) const { return act(g, reps_[static_cast<std::size_t>(h)]); }
  int inverse(int g) const { return evaluate(invert(reps_[static_cast<std::size_t>(g)])); }
  int element_order(int g) const;
  const Word& representative(int g) const { return reps_.at(static_cast<std::size_t>(g)); }
  /// Tree predecessor and letter used to reach g (g != identity).
  std::pair<int, Letter> tree_parent(int g) const { return parent_.at(static_cast<std::size_t>(g)); }

  const std::vector<std::vector<int>>& right_action() const noexcept { return action_; }
  std::vector<std::vector<int>> multiplication_table() const;

  bool is_abelian() const;
  /// Regular action (kernel normal), identity law, inverses, and associativity on generators.
  bool validate() const;

  /// Digit string "01" for (Z/q)^n elements, otherwise the representative word.
  std::string label(int g) const;
  /// Inverse of label(); also accepts a word evaluated through Psi.
  int parse_element(const std::string& text) const;

  nlohmann::json to_json() const;

 private:
  FiniteQuotient(int rank, std::vector<std::vector<int>> action, std::optional<int> exponent);

  int rank_;
  std::vector<std::vector<int>> action_;
  std::vector<std::vector<int>> inverse_action_;
  std::vector<Word> reps_;
  std::vector<std::pair<int, Letter>> parent_;
  std::optional<int> exponent_;
};

/// (Z/q)^n with Psi(x_i) the i-th standard vector. Element index is the base-q
/// number whose digits are the coordinates, first coordinate most significant.
FiniteQuotient mod_q_quotient(int rank, int q);

/// True when Gamma is certified to be the verbal quotient (Z/q)^n for its
/// declared q, so ker Psi = <[x,y], z^q> is invariant under every endomorphism.
/// False means "no certificate", not "not fully characteristic".
bool is_fully_characteristic_verbal(const FiniteQuotient& quotient);

/// ker Psi is invariant under the Nielsen generators of Aut(F_n), hence characteristic.
bool is_characteristic_nielsen(const FiniteQuotient& quotient);

struct CycleGenerator {
  int edge;   ///< index into the cover graph's edge list
  Word loop;  ///< tree path . edge . tree path^-1, a free generator of pi_1(X)
};

/// The regular cover of R_n defined by a finite quotient, based at the identity.
class BasedCover {
 public:
  explicit BasedCover(FiniteQuotient quotient);

  const FiniteQuotient& quotient() const noexcept { return quotient_; }
  const LabeledGraph& graph() const noexcept { return graph_; }
  int degree() const noexcept { return quotient_.order(); }
  int rank() const noexcept { return static_cast<int>(cycle_basis_.size()); }
  /// Edge g -> g * x_i has index g * n + (i - 1).
  int edge_index(int vertex, int label) const { return vertex * quotient_.rank() + label - 1; }
  const std::vector<int>& tree_edges() const noexcept { return tree_edges_; }
  const std::vector<CycleGenerator>& cycle_basis() const noexcept { return cycle_basis_; }
  /// Position of an edge in the cycle basis, or -1 for tree edges.
  int cycle_position(int edge) const { return cycle_position_.at(static_cast<std::size_t>(edge)); }
  /// Psi(w) == identity, i.e. w is a closed loop at the basepoint.
  bool contains(const Word& w) const { return quotient_.evaluate(w) == FiniteQuotient::identity(); }

  nlohmann::json to_json() const;
  std::string to_dot() const { return graph_.to_dot(); }

 private:
  FiniteQuotient quotient_;
  LabeledGraph graph_;
  std::vector<int> tree_edges_;
  std::vector<CycleGenerator> cycle_basis_;
  std::vector<int> cycle_position_;
};

BasedCover build_cover(const FiniteQuotient& quotient);

inline constexpr int kDefaultMaxVertices = 10000;

struct TowerLevel {
  BasedCover cover;
  /// Order of the deck group of this level over the previous one, q^{rank_{k-1}}.
  long relative_degree;
  /// A word in G_{k-1} \ G_k.
  Word descent_witness;
};

/// Iterated mod-q homology covers X_1 -> R_n, X_2 -> X_1, ... with every X_k
/// kept as a regular cover of R_n. levels()[k - 1] is X_k.
class CoverTower {
 public:
  CoverTower(int rank, int q, int max_vertices = kDefaultMaxVertices);

  int rank() const noexcept { return rank_; }
  int modulus() const noexcept { return q_; }
  int max_vertices() const noexcept { return max_vertices_; }
  int depth() const noexcept { return static_cast<int>(levels_.size()); }
  const std::vector<TowerLevel>& levels() const noexcept { return levels_; }
  const TowerLevel& level(int k) const { return levels_.at(static_cast<std::size_t>(k - 1)); }
  long total_degree(int k) const;

  /// Vertex count the next level would have, or nullopt if it overflows.
  std::optional<long> next_level_vertices() const;
  /// Builds one more level; throws BudgetExceeded if it would exceed the budget.
  const TowerLevel& extend();

  /// Re-checks w in G_{k-1} and w not in G_k for every stored witness.
  bool validate_descent() const;

  nlohmann::json to_json() const;

 private:
  int rank_;
  int q_;
  int max_vertices_;
  std::vector<TowerLevel> levels_;
};

/// Builds `depth` levels; throws BudgetExceeded naming the last level reached.
CoverTower build_tower(int rank, int q, int depth, int max_vertices = kDefaultMaxVertices);

struct Separation {
  std::optional<int> level;  ///< smallest k with w not in G_k
  int levels_examined = 0;
  bool budget_exhausted = false;
};

/// Bounded semi-decision: first tower level whose quotient sees w as nontrivial.
Separation separate_word(const Word& w, int q, int max_depth, int max_vertices = kDefaultMaxVertices);

enum class InducedKind { kIdentity, kAutomorphism, kProperEndomorphism };
std::string to_string(InducedKind kind);

struct InducedEndo {
  std::vector<int> map;  ///< map[g] = image of g
  InducedKind kind;
};

/// The endomorphism Psi(w) -> Psi(phi(w)) of Gamma. Throws PreconditionError
/// when ker Psi is not phi-invariant (the map would be ill defined).
InducedEndo induced_quotient_endo(const Endomorphism& phi, const FiniteQuotient& quotient);

/// Same test without throwing.
bool is_invariant_under(const Endomorphism& phi, const FiniteQuotient& quotient);

}  // namespace freecover
