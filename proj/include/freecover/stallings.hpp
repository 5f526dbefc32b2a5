#pragma once

// Labeled graphs over the rose R_n: Stallings subgroup graphs, membership,
// completion to finite covers and the exact surjectivity oracle.

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "freecover/word.hpp"

namespace freecover {

struct LabeledEdge {
  int source;
  int target;
  int label;  ///< generator index 1..n

  friend bool operator==(const LabeledEdge&, const LabeledEdge&) = default;
  friend auto operator<=>(const LabeledEdge&, const LabeledEdge&) = default;
};

/// Directed graph with edges labeled by generators; vertices are 0..V-1.
class LabeledGraph {
 public:
  LabeledGraph(int rank, int vertex_count, std::vector<LabeledEdge> edges,
               std::optional<int> basepoint = std::nullopt);

  /// R_n: one vertex carrying one loop per generator.
  static LabeledGraph rose(int rank);

  int rank() const noexcept { return rank_; }
  int vertex_count() const noexcept { return vertex_count_; }
  const std::vector<LabeledEdge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::optional<int> basepoint() const noexcept { return basepoint_; }

  /// No vertex has two outgoing, or two incoming, edges with the same label.
  bool is_folded() const;
  /// Every vertex except the basepoint has degree >= 2.
  bool is_core() const;
  /// Each vertex has exactly one outgoing and one incoming edge per label.
  bool is_cover() const;
  bool is_connected() const;
  bool is_rose() const;

  /// Target of the edge leaving `vertex` along signed letter `l`, if present.
  /// Only meaningful on folded graphs.
  std::optional<int> follow(int vertex, Letter l) const;
  /// End vertex of the path spelled by `w` from `start`, if it exists.
  std::optional<int> trace(int start, const Word& w) const;

  /// Relabels vertices in breadth-first order from the basepoint, exploring
  /// letters in the order x1, x1^-1, x2, ...; edges sorted. Two folded based
  /// connected graphs are isomorphic iff their canonical forms are equal.
  LabeledGraph canonical() const;

  nlohmann::json to_json() const;
  std::string to_dot() const;

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

 private:
  void build_index();

  int rank_;
  int vertex_count_;
  std::vector<LabeledEdge> edges_;
  std::optional<int> basepoint_;
  // out_[v * rank + (label - 1)] / in_[...]: an edge index or -1 (folded graphs).
  std::vector<int> out_;
  std::vector<int> in_;
};

/// Folds a based graph completely (union-find vertex identification) and
/// returns its canonical form. Clashes are resolved in (vertex, label) order.
LabeledGraph fold(const LabeledGraph& g);

/// Removes dangling trees not containing the basepoint.
LabeledGraph core(const LabeledGraph& g);

/// Folded core based graph of <gens>; empty gens give the one-vertex graph.
LabeledGraph graph_from_generators(int rank, const std::vector<Word>& gens);

/// True iff `w` spells a closed path at the basepoint. Requires a folded based graph.
bool contains(const LabeledGraph& g, const Word& w);

/// E - V + 1 for a connected graph.
int rank(const LabeledGraph& g);

/// Exact oracle: phi is onto iff the folded graph of its images is R_n.
bool is_surjective(const Endomorphism& phi);

/// Completes every label's partial permutation to a full one by matching
/// vertices lacking an outgoing edge with vertices lacking an incoming edge,
/// both in ascending order. No vertices are added.
LabeledGraph complete_to_cover(const LabeledGraph& g);

}  // namespace freecover
