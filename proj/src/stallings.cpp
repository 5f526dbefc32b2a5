#include "freecover/stallings.hpp"

#include <boost/pending/disjoint_sets.hpp>

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <sstream>

#include "freecover/error.hpp"

namespace freecover {

LabeledGraph::LabeledGraph(int rank, int vertex_count, std::vector<LabeledEdge> edges,
                           std::optional<int> basepoint)
    : rank_(rank), vertex_count_(vertex_count), edges_(std::move(edges)), basepoint_(basepoint) {
  if (rank < 2) throw InputError("graph rank must be at least 2");
  if (vertex_count < 0) throw InputError("negative vertex count");
  if (basepoint && (*basepoint < 0 || *basepoint >= vertex_count)) {
    throw InputError("basepoint out of range");
  }
  for (const auto& e : edges_) {
    if (e.source < 0 || e.source >= vertex_count || e.target < 0 || e.target >= vertex_count) {
      throw InputError("edge endpoint out of range");
    }
    if (e.label < 1 || e.label > rank) throw InputError("edge label out of range");
  }
  build_index();
}

void LabeledGraph::build_index() {
  const std::size_t slots = static_cast<std::size_t>(vertex_count_) * static_cast<std::size_t>(rank_);
  out_.assign(slots, -1);
  in_.assign(slots, -1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    const auto so = static_cast<std::size_t>(e.source * rank_ + e.label - 1);
    const auto ti = static_cast<std::size_t>(e.target * rank_ + e.label - 1);
    if (out_[so] < 0) out_[so] = static_cast<int>(i);
    if (in_[ti] < 0) in_[ti] = static_cast<int>(i);
  }
}

LabeledGraph LabeledGraph::rose(int rank) {
  std::vector<LabeledEdge> edges;
  for (int i = 1; i <= rank; ++i) edges.push_back({0, 0, i});
  return LabeledGraph(rank, 1, std::move(edges), 0);
}

bool LabeledGraph::is_folded() const {
  std::vector<int> out(out_.size(), 0), in(in_.size(), 0);
  for (const auto& e : edges_) {
    if (++out[static_cast<std::size_t>(e.source * rank_ + e.label - 1)] > 1) return false;
    if (++in[static_cast<std::size_t>(e.target * rank_ + e.label - 1)] > 1) return false;
  }
  return true;
}

bool LabeledGraph::is_core() const {
  std::vector<int> degree(static_cast<std::size_t>(vertex_count_), 0);
  for (const auto& e : edges_) {
    ++degree[static_cast<std::size_t>(e.source)];
    ++degree[static_cast<std::size_t>(e.target)];
  }
  for (int v = 0; v < vertex_count_; ++v) {
    if (basepoint_ && v == *basepoint_) continue;
    if (degree[static_cast<std::size_t>(v)] < 2) return false;
  }
  return true;
}

bool LabeledGraph::is_cover() const {
  std::vector<int> out(out_.size(), 0), in(in_.size(), 0);
  for (const auto& e : edges_) {
    ++out[static_cast<std::size_t>(e.source * rank_ + e.label - 1)];
    ++in[static_cast<std::size_t>(e.target * rank_ + e.label - 1)];
  }
  return std::all_of(out.begin(), out.end(), [](int c) { return c == 1; }) &&
         std::all_of(in.begin(), in.end(), [](int c) { return c == 1; });
}

bool LabeledGraph::is_connected() const {
  if (vertex_count_ == 0) return true;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(vertex_count_));
  for (const auto& e : edges_) {
    adj[static_cast<std::size_t>(e.source)].push_back(e.target);
    adj[static_cast<std::size_t>(e.target)].push_back(e.source);
  }
  std::vector<bool> seen(static_cast<std::size_t>(vertex_count_), false);
  std::deque<int> queue{0};
  seen[0] = true;
  int reached = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++reached;
        queue.push_back(w);
      }
    }
  }
  return reached == vertex_count_;
}

bool LabeledGraph::is_rose() const {
  return vertex_count_ == 1 && static_cast<int>(edges_.size()) == rank_ && is_folded();
}

std::optional<int> LabeledGraph::follow(int vertex, Letter l) const {
  const int label = std::abs(l);
  const auto slot = static_cast<std::size_t>(vertex * rank_ + label - 1);
  const int e = l > 0 ? out_[slot] : in_[slot];
  if (e < 0) return std::nullopt;
  const auto& edge = edges_[static_cast<std::size_t>(e)];
  return l > 0 ? edge.target : edge.source;
}

std::optional<int> LabeledGraph::trace(int start, const Word& w) const {
  if (w.rank() != rank_) throw InputError("word rank does not match graph rank");
  int v = start;
  for (Letter l : w.letters()) {
    const auto next = follow(v, l);
    if (!next) return std::nullopt;
    v = *next;
  }
  return v;
}

LabeledGraph LabeledGraph::canonical() const {
  if (!basepoint_) throw InputError("canonical form needs a basepoint");
  if (!is_folded()) throw InputError("canonical form needs a folded graph");
  std::vector<int> relabel(static_cast<std::size_t>(vertex_count_), -1);
  std::deque<int> queue{*basepoint_};
  relabel[static_cast<std::size_t>(*basepoint_)] = 0;
  int next_id = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int i = 1; i <= rank_; ++i) {
      for (Letter l : {i, -i}) {
        const auto w = follow(v, l);
        if (w && relabel[static_cast<std::size_t>(*w)] < 0) {
          relabel[static_cast<std::size_t>(*w)] = next_id++;
          queue.push_back(*w);
        }
      }
    }
  }
  if (next_id != vertex_count_) throw InputError("canonical form needs a connected graph");
  std::vector<LabeledEdge> edges;
  for (const auto& e : edges_) {
    edges.push_back({relabel[static_cast<std::size_t>(e.source)],
                     relabel[static_cast<std::size_t>(e.target)], e.label});
  }
  std::sort(edges.begin(), edges.end());
  return LabeledGraph(rank_, vertex_count_, std::move(edges), 0);
}

nlohmann::json LabeledGraph::to_json() const {
  nlohmann::json j;
  j["rank"] = rank_;
  std::vector<int> vertices(static_cast<std::size_t>(vertex_count_));
  for (int v = 0; v < vertex_count_; ++v) vertices[static_cast<std::size_t>(v)] = v;
  j["vertices"] = vertices;
  auto edges = nlohmann::json::array();
  for (const auto& e : edges_) edges.push_back({e.source, e.target, e.label});
  j["edges"] = edges;
  j["basepoint"] = basepoint_ ? nlohmann::json(*basepoint_) : nlohmann::json(nullptr);
  return j;
}

std::string LabeledGraph::to_dot() const {
  std::ostringstream os;
  os << "digraph G {\n";
  for (int v = 0; v < vertex_count_; ++v) {
    os << "  " << v;
    if (basepoint_ && v == *basepoint_) os << " [shape=doublecircle]";
    os << ";\n";
  }
  for (const auto& e : edges_) {
    os << "  " << e.source << " -> " << e.target << " [label=\"x" << e.label << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------

LabeledGraph fold(const LabeledGraph& g) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  std::vector<std::size_t> rank_storage(n), parent(n);
  boost::disjoint_sets<std::size_t*, std::size_t*> sets(rank_storage.data(), parent.data());
  for (std::size_t v = 0; v < n; ++v) sets.make_set(v);
  auto find = [&](int v) { return static_cast<int>(sets.find_set(static_cast<std::size_t>(v))); };

  std::vector<LabeledEdge> edges = g.edges();
  bool merged = true;
  while (merged) {
    merged = false;
    for (auto& e : edges) e = {find(e.source), find(e.target), e.label};
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::map<std::pair<int, int>, int> out, in;
    for (const auto& e : edges) {
      const int s = find(e.source);
      const int t = find(e.target);
      if (auto [it, fresh] = out.try_emplace({s, e.label}, t); !fresh && find(it->second) != t) {
        sets.union_set(static_cast<std::size_t>(it->second), static_cast<std::size_t>(t));
        merged = true;
      }
      if (auto [it, fresh] = in.try_emplace({find(e.target), e.label}, find(e.source));
          !fresh && find(it->second) != find(e.source)) {
        sets.union_set(static_cast<std::size_t>(it->second), static_cast<std::size_t>(find(e.source)));
        merged = true;
      }
    }
  }

  // Compact representatives to 0..k-1.
  std::map<int, int> compact;
  for (std::size_t v = 0; v < n; ++v) compact.try_emplace(find(static_cast<int>(v)), static_cast<int>(compact.size()));
  for (auto& e : edges) e = {compact.at(e.source), compact.at(e.target), e.label};
  std::optional<int> base;
  if (g.basepoint()) base = compact.at(find(*g.basepoint()));
  LabeledGraph folded(g.rank(), static_cast<int>(compact.size()), std::move(edges), base);
  return base ? folded.canonical() : folded;
}

LabeledGraph core(const LabeledGraph& g) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  std::vector<bool> alive(n, true);
  std::vector<bool> edge_alive(g.edge_count(), true);
  bool pruned = true;
  while (pruned) {
    pruned = false;
    std::vector<int> degree(n, 0);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      if (!edge_alive[i]) continue;
      ++degree[static_cast<std::size_t>(g.edges()[i].source)];
      ++degree[static_cast<std::size_t>(g.edges()[i].target)];
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v] || (g.basepoint() && static_cast<int>(v) == *g.basepoint())) continue;
      if (degree[v] < 2) {
        alive[v] = false;
        pruned = true;
        for (std::size_t i = 0; i < g.edge_count(); ++i) {
          const auto& e = g.edges()[i];
          if (static_cast<std::size_t>(e.source) == v || static_cast<std::size_t>(e.target) == v) edge_alive[i] = false;
        }
      }
    }
  }
  std::vector<int> relabel(n, -1);
  int k = 0;
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v]) relabel[v] = k++;
  std::vector<LabeledEdge> edges;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (!edge_alive[i]) continue;
    const auto& e = g.edges()[i];
    edges.push_back({relabel[static_cast<std::size_t>(e.source)], relabel[static_cast<std::size_t>(e.target)], e.label});
  }
  std::optional<int> base;
  if (g.basepoint()) base = relabel[static_cast<std::size_t>(*g.basepoint())];
  return LabeledGraph(g.rank(), k, std::move(edges), base);
}

LabeledGraph graph_from_generators(int rank, const std::vector<Word>& gens) {
  int vertex_count = 1;
  std::vector<LabeledEdge> edges;
  for (const Word& w : gens) {
    if (w.rank() != rank) throw InputError("generator rank does not match");
    if (w.empty()) continue;
    const auto& letters = w.letters();
    int prev = 0;
    for (std::size_t i = 0; i < letters.size(); ++i) {
      const int next = i + 1 == letters.size() ? 0 : vertex_count++;
      const Letter l = letters[i];
      if (l > 0) {
        edges.push_back({prev, next, l});
      } else {
        edges.push_back({next, prev, -l});
      }
      prev = next;
    }
  }
  const LabeledGraph petals(rank, vertex_count, std::move(edges), 0);
  return core(fold(petals)).canonical();
}

bool contains(const LabeledGraph& g, const Word& w) {
  if (!g.basepoint()) throw InputError("membership needs a based graph");
  if (!g.is_folded()) throw InputError("membership needs a folded graph");
  const auto end = g.trace(*g.basepoint(), w);
  return end && *end == *g.basepoint();
}

int rank(const LabeledGraph& g) {
  if (!g.is_connected()) throw InputError("rank of a disconnected graph");
  return static_cast<int>(g.edge_count()) - g.vertex_count() + 1;
}

bool is_surjective(const Endomorphism& phi) {
  return graph_from_generators(phi.rank(), phi.images()).is_rose();
}

LabeledGraph complete_to_cover(const LabeledGraph& g) {
  if (!g.is_folded()) throw InputError("cover completion needs a folded graph");
  std::vector<LabeledEdge> edges = g.edges();
  for (int label = 1; label <= g.rank(); ++label) {
    std::vector<int> missing_out, missing_in;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (!g.follow(v, label)) missing_out.push_back(v);
      if (!g.follow(v, -label)) missing_in.push_back(v);
    }
    for (std::size_t k = 0; k < missing_out.size(); ++k) {
      edges.push_back({missing_out[k], missing_in[k], label});
    }
  }
  std::sort(edges.begin(), edges.end());
  return LabeledGraph(g.rank(), g.vertex_count(), std::move(edges), g.basepoint());
}

}  // namespace freecover
