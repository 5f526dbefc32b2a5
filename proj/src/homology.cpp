#include "freecover/homology.hpp"

#include <algorithm>
#include <cstdlib>

#include "freecover/error.hpp"
#include "freecover/stallings.hpp"

namespace freecover {

IntVector path_class(const BasedCover& cover, int start, const Word& w) {
  if (w.rank() != cover.quotient().rank()) throw InputError("word rank does not match cover rank");
  const auto& q = cover.quotient();
  IntVector c(static_cast<std::size_t>(cover.rank()));
  int v = start;
  for (Letter l : w.letters()) {
    if (l > 0) {
      const int j = cover.cycle_position(cover.edge_index(v, l));
      if (j >= 0) c[static_cast<std::size_t>(j)] += 1;
      v = q.act(v, l);
    } else {
      const int u = q.act(v, l);
      const int j = cover.cycle_position(cover.edge_index(u, -l));
      if (j >= 0) c[static_cast<std::size_t>(j)] -= 1;
      v = u;
    }
  }
  return c;
}

IntVector cycle_class(const BasedCover& cover, const Word& w) {
  if (!cover.contains(w)) throw PreconditionError("word " + w.str() + " is not a loop in the cover");
  return path_class(cover, FiniteQuotient::identity(), w);
}

IntMatrix deck_matrix(const BasedCover& cover, int g) {
  if (g < 0 || g >= cover.degree()) throw InputError("deck element out of range");
  std::vector<IntVector> cols;
  for (const auto& c : cover.cycle_basis()) cols.push_back(path_class(cover, g, c.loop));
  return IntMatrix::from_columns(cols, static_cast<std::size_t>(cover.rank()));
}

IntMatrix lift_matrix(const Endomorphism& phi, const BasedCover& cover) {
  if (!is_invariant_under(phi, cover.quotient())) {
    throw PreconditionError("cover is not invariant under " + phi.str() + "; no based lift exists");
  }
  std::vector<IntVector> cols;
  for (const auto& c : cover.cycle_basis()) cols.push_back(cycle_class(cover, phi.apply(c.loop)));
  return IntMatrix::from_columns(cols, static_cast<std::size_t>(cover.rank()));
}

IntMatrix abelianization_matrix(const Endomorphism& phi) {
  const auto n = static_cast<std::size_t>(phi.rank());
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = abelianize(phi.image(static_cast<int>(i) + 1));
    for (std::size_t r = 0; r < n; ++r) m(r, i) = a[r];
  }
  return m;
}

bool equivariance_check(const Endomorphism& phi, const BasedCover& cover) {
  if (!is_surjective(phi)) throw PreconditionError(phi.str() + " is not an automorphism");
  const IntMatrix m = lift_matrix(phi, cover);
  for (int g = 1; g < cover.degree(); ++g) {
    const IntMatrix d = deck_matrix(cover, g);
    if (!(m * d == d * m)) return false;
  }
  return true;
}

bool twisted_equivariance_holds(const Endomorphism& phi, const BasedCover& cover) {
  const IntMatrix m = lift_matrix(phi, cover);
  const auto induced = induced_quotient_endo(phi, cover.quotient());
  for (int g = 0; g < cover.degree(); ++g) {
    if (!(m * deck_matrix(cover, g) == deck_matrix(cover, induced.map[static_cast<std::size_t>(g)]) * m)) return false;
  }
  return true;
}

std::string to_string(CertificateGoal goal) {
  return goal == CertificateGoal::kNonEpimorphism ? "non-epimorphism" : "nontrivial";
}

namespace {

std::optional<Certificate> examine(const Endomorphism& phi, const BasedCover& cover, int q, int level,
                                   const SearchOptions& options, CertificateSearch& log) {
  const IntMatrix m = lift_matrix(phi, cover);
  const bool epi = m.determinant() * m.determinant() == 1;
  const bool identity = m.is_identity();
  log.searched.push_back({q, level, cover.degree(), cover.rank(), epi, identity});
  const bool hit = options.goal == CertificateGoal::kNonEpimorphism ? !epi : !identity;
  if (!hit) return std::nullopt;
  Certificate c{phi.str(), q, level, cover.degree(), m, smith_normal_form(m).diagonal(),
                epi ? "nontrivial" : "non-epimorphism"};
  return c;
}

}  // namespace

CertificateSearch find_nonsurjectivity_certificate(const Endomorphism& phi, const SearchOptions& options) {
  if (options.depth < 0) throw InputError("search depth must be non-negative");
  std::vector<int> qs = options.q_list;
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  if (qs.empty()) throw InputError("empty modulus list");
  for (int q : qs)
    if (q < 2) throw InputError("modulus q must be at least 2, got " + std::to_string(q));

  CertificateSearch log;
  const BasedCover rose(FiniteQuotient::trivial(phi.rank()));
  if (auto c = examine(phi, rose, qs.front(), 0, options, log)) {
    log.certificate = std::move(c);
    return log;
  }
  for (int q : qs) {
    CoverTower tower(phi.rank(), q, options.max_vertices);
    for (int k = 1; k <= options.depth; ++k) {
      try {
        tower.extend();
      } catch (const BudgetExceeded&) {
        log.budget_refusals.emplace_back(q, k);
        break;
      }
      if (auto c = examine(phi, tower.level(k).cover, q, k, options, log)) {
        log.certificate = std::move(c);
        return log;
      }
    }
  }
  return log;
}

nlohmann::json to_json(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

nlohmann::json to_json(const IntVector& v) {
  auto j = nlohmann::json::array();
  for (const auto& x : v) j.push_back(to_json(x));
  return j;
}

nlohmann::json to_json(const IntMatrix& m) {
  auto j = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) j.push_back(to_json(m.row(r)));
  return j;
}

nlohmann::json to_json(const Certificate& c) {
  return {{"endomorphism", c.endomorphism}, {"q", c.q},
          {"level", c.level},               {"cover_degree", c.cover_degree},
          {"matrix", to_json(c.matrix)},    {"snf_diagonal", to_json(c.snf_diagonal)},
          {"verdict", c.verdict}};
}

nlohmann::json to_json(const CertificateSearch& s) {
  nlohmann::json j;
  j["certificate"] = s.certificate ? to_json(*s.certificate) : nlohmann::json(nullptr);
  auto searched = nlohmann::json::array();
  for (const auto& c : s.searched) {
    searched.push_back({{"q", c.q}, {"level", c.level}, {"degree", c.degree}, {"rank", c.rank},
                        {"epi", c.epi}, {"identity", c.identity}});
  }
  j["searched"] = searched;
  auto refused = nlohmann::json::array();
  for (const auto& [q, level] : s.budget_refusals) refused.push_back({{"q", q}, {"level", level}});
  j["budget_refusals"] = refused;
  return j;
}

}  // namespace freecover
