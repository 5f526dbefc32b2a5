#include "freecover/nilpotent.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "freecover/error.hpp"
#include "freecover/stallings.hpp"
#include "freecover/whitehead.hpp"

namespace freecover {

TruncatedSeries::TruncatedSeries(int rank, int cap) : rank_(rank), cap_(cap) {
  if (cap < 1 || cap > kMaxMagnusCap) {
    throw InputError("Magnus cap must be in 1.." + std::to_string(kMaxMagnusCap) + ", got " + std::to_string(cap));
  }
}

TruncatedSeries TruncatedSeries::one(int rank, int cap) {
  TruncatedSeries s(rank, cap);
  s.terms_[{}] = 1;
  return s;
}

Integer TruncatedSeries::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Integer(0) : it->second;
}

void TruncatedSeries::add(const Monomial& m, const Integer& c) {
  if (static_cast<int>(m.size()) > cap_ || c == 0) return;
  auto [it, fresh] = terms_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool TruncatedSeries::is_one() const { return terms_.size() == 1 && coefficient({}) == 1; }

std::optional<int> TruncatedSeries::lowest_nonconstant_degree() const {
  std::optional<int> low;
  for (const auto& [m, c] : terms_) {
    if (m.empty()) continue;
    const int d = static_cast<int>(m.size());
    if (!low || d < *low) low = d;
  }
  return low;
}

std::string TruncatedSeries::str() const {
  std::vector<std::pair<Monomial, Integer>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first.size() < b.first.size(); });
  if (sorted.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : sorted) {
    const bool negative = c < 0;
    Integer magnitude = abs(c);
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    if (m.empty() || magnitude != 1) out << magnitude.get_str();
    for (int i : m) out << "X" << i;
  }
  return out.str();
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.rank_ != b.rank_ || a.cap_ != b.cap_) throw InputError("series rank or cap mismatch");
  TruncatedSeries out(a.rank_, a.cap_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      if (static_cast<int>(ma.size() + mb.size()) > a.cap_) continue;
      Monomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add(m, ca * cb);
    }
  }
  return out;
}

TruncatedSeries magnus(const Word& w, int cap) {
  TruncatedSeries s = TruncatedSeries::one(w.rank(), cap);
  for (Letter l : w.letters()) {
    const int i = std::abs(l);
    TruncatedSeries next = s;
    for (const auto& [m, c] : s.coefficients()) {
      Monomial grown = m;
      Integer coeff = c;
      // x_i = 1 + X_i; x_i^-1 = 1 - X_i + X_i^2 - ...
      for (int j = 1; static_cast<int>(m.size()) + j <= cap; ++j) {
        grown.push_back(i);
        if (l < 0) coeff = -coeff;
        next.add(grown, coeff);
        if (l > 0) break;
      }
    }
    s = std::move(next);
  }
  return s;
}

bool congruent_mod_lcs(const Word& u, const Word& v, int k) {
  if (k < 1) throw InputError("lower central series level must be at least 1");
  return magnus(u * invert(v), k).is_one();
}

std::vector<Word> left_normed_commutators(int rank, int k) {
  if (k < 1) throw InputError("commutator weight must be at least 1");
  std::vector<Word> out;
  std::vector<int> idx(static_cast<std::size_t>(k), 1);
  while (true) {
    if (k == 1 || idx[0] != idx[1]) {
      std::vector<Word> gens;
      for (int i : idx) gens.push_back(Word::generator(rank, i));
      out.push_back(k == 1 ? gens.front() : commutator(gens));
    }
    int p = k - 1;
    while (p >= 0 && idx[static_cast<std::size_t>(p)] == rank) idx[static_cast<std::size_t>(p--)] = 1;
    if (p < 0) break;
    ++idx[static_cast<std::size_t>(p)];
  }
  return out;
}

bool acts_trivially_on_lcs_quotient(const Endomorphism& phi, int k, const std::vector<Word>& sample) {
  if (k < 1) throw InputError("lower central series level must be at least 1");
  for (const Word& w : sample) {
    if (k > 1) {
      const auto low = magnus(w, k - 1).lowest_nonconstant_degree();
      if (low) throw PreconditionError("sample word " + w.str() + " is not in F^(" + std::to_string(k) + ")");
    }
    if (!congruent_mod_lcs(phi.apply(w), w, k)) return false;
  }
  return true;
}

bool is_epi_on_nilpotent_quotient(const Endomorphism& phi, int k) {
  if (k < 2) throw InputError("nilpotent quotient level must be at least 2");
  const Integer det = abelianization_matrix(phi).determinant();
  return det == 1 || det == -1;
}

Word witness_alpha(int rank) {
  if (rank < 2) throw InputError("rank must be at least 2");
  std::vector<Letter> ls;
  for (int i = rank; i >= 1; --i) ls.push_back(i);
  for (int i = rank; i >= 1; --i) ls.insert(ls.end(), {-i, -i});
  return Word(rank, ls);
}

Word witness_alpha_variant(int rank) {
  if (rank < 2) throw InputError("rank must be at least 2");
  std::vector<Letter> ls;
  for (int i = rank; i >= 1; --i) ls.push_back(i);
  ls.insert(ls.end(), {-rank, -rank});
  for (int i = rank - 1; i >= 3; --i) ls.insert(ls.end(), {i, i});
  if (rank >= 3) ls.push_back(-2);
  ls.push_back(-1);
  return Word(rank, ls);
}

Endomorphism conjugating_endomorphism(const Word& alpha) {
  std::vector<Word> images;
  for (int i = 1; i <= alpha.rank(); ++i) images.push_back(Word::generator(alpha.rank(), i));
  images[0] = invert(alpha) * images[0] * alpha;
  return Endomorphism(std::move(images));
}

WitnessReport conjugation_witness(int rank, const WitnessOptions& options) {
  const Word alpha = options.use_variant ? witness_alpha_variant(rank) : witness_alpha(rank);
  const Endomorphism phi = conjugating_endomorphism(alpha);
  WitnessReport r{rank, alpha, phi, is_surjective(phi), {}, {}, Word(rank), false, {}, false, false, std::nullopt, {}};

  for (int k = 2; k <= options.nilpotent_cap; ++k) r.nilpotent_epi.emplace_back(k, is_epi_on_nilpotent_quotient(phi, k));
  for (int k = 1; k <= std::min(options.nilpotent_cap, 3); ++k) {
    r.lcs_trivial.emplace_back(k, acts_trivially_on_lcs_quotient(phi, k, left_normed_commutators(rank, k)));
  }

  r.test_word = cyclic_reduce(phi.apply(Word(rank, {1, 2}))).core;
  const WhiteheadGraph wh = whitehead_graph(r.test_word);
  const auto conn = is_connected_no_cut_vertex(wh);
  r.whitehead_connected = conn.connected;
  r.whitehead_cut_vertices = conn.cut_vertices;
  r.not_separable_certified = conn.connected && conn.cut_vertices.empty();
  const std::set<std::pair<int, int>> test_edges(wh.edges.begin(), wh.edges.end());
  const auto alpha_edges = whitehead_graph(alpha).edges;
  r.alpha_graph_contained = std::all_of(alpha_edges.begin(), alpha_edges.end(),
                                        [&](const auto& e) { return test_edges.count(e) > 0; });
  try {
    r.whitehead_minimal_length = whitehead_reduce(r.test_word).minimal_length;
  } catch (const BudgetExceeded&) {
    r.whitehead_minimal_length = std::nullopt;
  }

  r.certificate = find_nonsurjectivity_certificate(phi, options.search);
  return r;
}

nlohmann::json to_json(const WitnessReport& r) {
  nlohmann::json j;
  j["rank"] = r.rank;
  j["alpha"] = r.alpha.str();
  j["phi"] = r.phi.str();
  j["fold"] = {{"surjective", r.surjective}};
  auto epi = nlohmann::json::array();
  for (const auto& [k, ok] : r.nilpotent_epi) epi.push_back({{"k", k}, {"epi", ok}});
  auto trivial = nlohmann::json::array();
  for (const auto& [k, ok] : r.lcs_trivial) trivial.push_back({{"k", k}, {"trivial", ok}});
  j["nilpotent"] = {{"epi_on_quotients", epi}, {"trivial_on_layers", trivial}};
  std::vector<std::string> cuts;
  for (int v : r.whitehead_cut_vertices) cuts.push_back(whitehead_vertex_label(v));
  j["whitehead"] = {{"word", r.test_word.str()},
                    {"connected", r.whitehead_connected},
                    {"cut_vertices", cuts},
                    {"not_separable_certified", r.not_separable_certified},
                    {"alpha_subgraph", r.alpha_graph_contained},
                    {"minimal_length", r.whitehead_minimal_length ? nlohmann::json(*r.whitehead_minimal_length)
                                                                  : nlohmann::json(nullptr)}};
  j["homology"] = to_json(r.certificate);
  return j;
}

}  // namespace freecover
