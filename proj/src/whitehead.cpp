#include "freecover/whitehead.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/biconnected_components.hpp>
#include <boost/graph/connected_components.hpp>

#include "freecover/error.hpp"

namespace freecover {

int whitehead_vertex(Letter l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

Letter whitehead_letter(int vertex) {
  const int i = vertex / 2 + 1;
  return vertex % 2 == 0 ? i : -i;
}

std::string whitehead_vertex_label(int vertex) {
  const Letter l = whitehead_letter(vertex);
  return "x" + std::to_string(std::abs(l)) + (l < 0 ? "^-1" : "");
}

WhiteheadGraph whitehead_graph(const Word& w) {
  const Word core = cyclic_reduce(w).core;
  if (core.empty()) throw InputError("Whitehead graph of the trivial word");
  WhiteheadGraph g{w.rank(), {}};
  const auto& ls = core.letters();
  for (std::size_t p = 0; p < ls.size(); ++p) {
    const int a = whitehead_vertex(ls[p]);
    const int b = whitehead_vertex(-ls[(p + 1) % ls.size()]);
    g.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return g;
}

WhiteheadConnectivity is_connected_no_cut_vertex(const WhiteheadGraph& g) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
                                      boost::property<boost::edge_index_t, std::size_t>>;
  const int n = g.vertex_count();
  // Parallel edges never create cut vertices; work on the simple graph.
  std::set<std::pair<int, int>> simple(g.edges.begin(), g.edges.end());
  Graph graph(static_cast<std::size_t>(n));
  std::size_t index = 0;
  for (const auto& [a, b] : simple) boost::add_edge(static_cast<std::size_t>(a), static_cast<std::size_t>(b), index++, graph);

  WhiteheadConnectivity out{};
  std::vector<int> component(static_cast<std::size_t>(n));
  const int components = static_cast<int>(boost::connected_components(graph, component.data()));
  for (int v = 0; v < n; ++v)
    if (boost::degree(static_cast<std::size_t>(v), graph) == 0) out.isolated.push_back(v);
  out.connected = components == 1;
  out.connected_occurring = components - static_cast<int>(out.isolated.size()) == 1;

  std::vector<std::size_t> cuts;
  boost::articulation_points(graph, std::back_inserter(cuts));
  for (std::size_t v : cuts) out.cut_vertices.push_back(static_cast<int>(v));
  std::sort(out.cut_vertices.begin(), out.cut_vertices.end());
  out.cut_vertices.erase(std::unique(out.cut_vertices.begin(), out.cut_vertices.end()), out.cut_vertices.end());
  return out;
}

bool is_separable_certified_negative(const Word& w) {
  const auto c = is_connected_no_cut_vertex(whitehead_graph(w));
  return c.connected && c.cut_vertices.empty();
}

std::string to_dot(const WhiteheadGraph& g) {
  std::ostringstream out;
  out << "graph whitehead {\n";
  for (int v = 0; v < g.vertex_count(); ++v) out << "  \"" << whitehead_vertex_label(v) << "\";\n";
  for (const auto& [a, b] : g.edges) {
    out << "  \"" << whitehead_vertex_label(a) << "\" -- \"" << whitehead_vertex_label(b) << "\";\n";
  }
  out << "}\n";
  return out.str();
}

Endomorphism whitehead_automorphism(int rank, Letter multiplier, unsigned subset) {
  const Word a(rank, {multiplier});
  std::vector<Word> images;
  for (int i = 1; i <= rank; ++i) {
    const Word x = Word::generator(rank, i);
    if (i == std::abs(multiplier)) {
      images.push_back(x);
      continue;
    }
    Word image = x;
    if (subset & (1u << whitehead_vertex(-i))) image = invert(a) * image;
    if (subset & (1u << whitehead_vertex(i))) image = image * a;
    images.push_back(image);
  }
  return Endomorphism(std::move(images));
}

WhiteheadReduction whitehead_reduce(const Word& w, const WhiteheadLimits& limits) {
  Word current = cyclic_reduce(w).core;
  if (current.empty()) throw InputError("Whitehead reduction of the trivial word");
  if (w.rank() > limits.max_rank || static_cast<int>(current.length()) > limits.max_length) {
    throw BudgetExceeded("Whitehead reduction limited to rank <= " + std::to_string(limits.max_rank) +
                             " and cyclic length <= " + std::to_string(limits.max_length),
                         0);
  }
  const int n = w.rank();
  const int vertices = 2 * n;
  int moves = 0;
  bool reduced = true;
  while (reduced && current.length() > 1) {
    reduced = false;
    for (int av = 0; av < vertices && !reduced; ++av) {
      const Letter a = whitehead_letter(av);
      const unsigned fixed = (1u << av) | (1u << whitehead_vertex(-a));
      for (unsigned subset = 1; subset < (1u << vertices); ++subset) {
        if (subset & fixed) continue;
        const Word image = cyclic_reduce(whitehead_automorphism(n, a, subset).apply(current)).core;
        if (image.length() < current.length()) {
          current = image;
          ++moves;
          reduced = true;
          break;
        }
      }
    }
  }
  return {static_cast<int>(current.length()), current, moves};
}

}  // namespace freecover
