#pragma once

// Whitehead graphs of cyclic words, cut vertices, and length reduction by
// Whitehead automorphisms as an independent primitivity oracle.

#include <string>
#include <utility>
#include <vector>

#include "freecover/word.hpp"

namespace freecover {

/// Vertex 2(i-1) is x_i, vertex 2(i-1)+1 is x_i^-1.
int whitehead_vertex(Letter l);
Letter whitehead_letter(int vertex);
std::string whitehead_vertex_label(int vertex);

struct WhiteheadGraph {
  int rank;
  /// One edge per cyclic position, stored as (min, max) vertex pairs.
  std::vector<std::pair<int, int>> edges;
  int vertex_count() const noexcept { return 2 * rank; }
};

/// For each pair of cyclically successive letters a b, an edge {a, b^-1}.
/// The input is cyclically reduced first; throws InputError on the trivial word.
WhiteheadGraph whitehead_graph(const Word& w);

struct WhiteheadConnectivity {
  /// Connectivity over all 2n vertices (isolated vertices disconnect).
  bool connected;
  /// Connectivity of the subgraph on the non-isolated vertices.
  bool connected_occurring;
  std::vector<int> isolated;
  std::vector<int> cut_vertices;
};

WhiteheadConnectivity is_connected_no_cut_vertex(const WhiteheadGraph& g);

/// True when Wh(w) is connected over all 2n vertices with no cut vertex,
/// which certifies w is not separable (so not primitive). False only means
/// no certificate.
bool is_separable_certified_negative(const Word& w);

std::string to_dot(const WhiteheadGraph& g);

struct WhiteheadLimits {
  int max_rank = 3;
  int max_length = 20;
};

struct WhiteheadReduction {
  int minimal_length;
  Word reduced_word;
  int moves_applied;
};

/// The type II Whitehead automorphism (A, a): x -> a^-1 x if x^-1 in A,
/// x -> x a if x in A, a fixed. `subset` is A minus a, as a bitmask over
/// Whitehead vertices; bits of a and a^-1 are ignored.
Endomorphism whitehead_automorphism(int rank, Letter multiplier, unsigned subset);

/// Greedy cyclic-length reduction by type II moves (type I moves never change
/// length), taking the first strict reducer in (multiplier vertex, subset)
/// order. w is primitive iff the minimal length is 1. Throws BudgetExceeded
/// beyond `limits`.
WhiteheadReduction whitehead_reduce(const Word& w, const WhiteheadLimits& limits = {});

}  // namespace freecover
