#include "freecover/surfaces.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "freecover/error.hpp"
#include "freecover/homology.hpp"
#include "freecover/stallings.hpp"

namespace freecover {

// ---------------------------------------------------------------------------
// RibbonStructure

RibbonStructure::RibbonStructure(int rank, std::vector<Letter> rotation) : rank_(rank), rotation_(std::move(rotation)) {
  if (rank < 2) throw InputError("rank must be at least 2");
  if (static_cast<int>(rotation_.size()) != 2 * rank) {
    throw InputError("rotation must list all " + std::to_string(2 * rank) + " half-edges exactly once");
  }
  position_.assign(static_cast<std::size_t>(2 * rank), -1);
  for (std::size_t p = 0; p < rotation_.size(); ++p) {
    const Letter l = rotation_[p];
    if (l == 0 || std::abs(l) > rank) throw InputError("rotation letter out of range");
    auto& slot = position_[static_cast<std::size_t>(2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0))];
    if (slot >= 0) throw InputError("rotation repeats a half-edge");
    slot = static_cast<int>(p);
  }
  std::vector<bool> seen(rotation_.size(), false);
  for (std::size_t p = 0; p < rotation_.size(); ++p) {
    if (seen[p]) continue;
    std::vector<Letter> walk;
    Letter l = rotation_[p];
    while (!seen[static_cast<std::size_t>(position(l))]) {
      seen[static_cast<std::size_t>(position(l))] = true;
      walk.push_back(l);
      l = next(-l);
    }
    boundary_.emplace_back(rank_, walk);
  }
}

RibbonStructure RibbonStructure::parse(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  if (tokens.size() < 4 || tokens.size() % 2 != 0) {
    throw InputError("rotation needs an even number (>= 4) of half-edges, got '" + text + "'");
  }
  const int rank = static_cast<int>(tokens.size() / 2);
  std::vector<Letter> rotation;
  for (const auto& t : tokens) {
    const Word w = Word::parse(t, rank);
    if (w.length() != 1) throw InputError("rotation entry '" + t + "' is not a single letter");
    rotation.push_back(w.letters().front());
  }
  return RibbonStructure(rank, std::move(rotation));
}

int RibbonStructure::position(Letter l) const {
  return position_.at(static_cast<std::size_t>(2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0)));
}

Letter RibbonStructure::next(Letter l) const {
  return rotation_[static_cast<std::size_t>((position(l) + 1) % (2 * rank_))];
}

std::string RibbonStructure::str() const {
  std::string out;
  for (Letter l : rotation_) {
    if (!out.empty()) out += ' ';
    out += Word(rank_, {l}).str();
  }
  return out;
}

RibbonStructure rose_ribbon(int rank, const std::vector<Letter>& rotation) { return RibbonStructure(rank, rotation); }

// ---------------------------------------------------------------------------
// RibbonCover

namespace {

// Edge chain of every cycle-basis loop: chains[e] lists (basis index, coefficient).
std::vector<std::vector<std::pair<int, long>>> edge_chains(const BasedCover& cover) {
  const auto& q = cover.quotient();
  const auto edges = static_cast<std::size_t>(cover.degree() * q.rank());
  std::vector<std::vector<long>> dense(edges, std::vector<long>(static_cast<std::size_t>(cover.rank()), 0));
  for (std::size_t j = 0; j < cover.cycle_basis().size(); ++j) {
    int v = FiniteQuotient::identity();
    for (Letter l : cover.cycle_basis()[j].loop.letters()) {
      if (l > 0) {
        dense[static_cast<std::size_t>(cover.edge_index(v, l))][j] += 1;
        v = q.act(v, l);
      } else {
        v = q.act(v, l);
        dense[static_cast<std::size_t>(cover.edge_index(v, -l))][j] -= 1;
      }
    }
  }
  std::vector<std::vector<std::pair<int, long>>> sparse(edges);
  for (std::size_t e = 0; e < edges; ++e)
    for (std::size_t j = 0; j < dense[e].size(); ++j)
      if (dense[e][j] != 0) sparse[e].emplace_back(static_cast<int>(j), dense[e][j]);
  return sparse;
}

// Each cycle is pushed to the left side of every band for the first argument
// and to the right side for the second; inside a vertex disk the signed
// crossings are counted from the counterclockwise order of the endpoints.
IntMatrix band_pairing(const RibbonStructure& base, const BasedCover& cover) {
  const auto& q = cover.quotient();
  const auto r = static_cast<std::size_t>(cover.rank());
  const auto chains = edge_chains(cover);
  std::vector<long> omega(r * r, 0);
  std::vector<long> w(r);
  for (int g = 0; g < cover.degree(); ++g) {
    std::fill(w.begin(), w.end(), 0);
    for (Letter l : base.rotation()) {
      const bool source = l > 0;
      const int e = source ? cover.edge_index(g, l) : cover.edge_index(q.act(g, l), -l);
      const long sign = source ? 1 : -1;
      const auto& chain = chains[static_cast<std::size_t>(e)];
      auto b_point = [&] {
        for (const auto& [j, c] : chain)
          for (std::size_t i = 0; i < r; ++i) omega[i * r + static_cast<std::size_t>(j)] += w[i] * sign * c;
      };
      auto a_point = [&] {
        for (const auto& [j, c] : chain) w[static_cast<std::size_t>(j)] += sign * c;
      };
      // Source end: right strand just before the half-edge, left strand just after.
      if (source) {
        b_point();
        a_point();
      } else {
        a_point();
        b_point();
      }
    }
  }
  IntMatrix out(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) out(i, j) = omega[i * r + j];
  return out;
}

IntMatrix select_columns(const IntMatrix& m, std::size_t from) {
  return m.block(0, from, m.rows(), m.cols() - from);
}

}  // namespace

RibbonCover::RibbonCover(RibbonStructure base, BasedCover cover, int q, int level)
    : base_(std::move(base)), cover_(std::move(cover)), q_(q), level_(level) {
  if (base_.rank() != cover_.quotient().rank()) throw InputError("ribbon rank does not match cover rank");
  const auto& quot = cover_.quotient();
  const int n2 = 2 * base_.rank();

  std::vector<bool> seen(static_cast<std::size_t>(cover_.degree() * n2), false);
  for (int g = 0; g < cover_.degree(); ++g) {
    for (Letter first : base_.rotation()) {
      int v = g;
      Letter l = first;
      if (seen[static_cast<std::size_t>(v * n2 + base_.position(l))]) continue;
      std::vector<Letter> walk;
      while (!seen[static_cast<std::size_t>(v * n2 + base_.position(l))]) {
        seen[static_cast<std::size_t>(v * n2 + base_.position(l))] = true;
        walk.push_back(l);
        v = quot.act(v, l);
        l = base_.next(-l);
      }
      walks_.push_back({g, Word(base_.rank(), walk)});
    }
  }

  omega_ = band_pairing(base_, cover_);
  const auto r = static_cast<std::size_t>(cover_.rank());
  std::vector<IntVector> cols;
  for (const auto& w : walks_) cols.push_back(path_class(cover_, w.start, w.word));
  boundary_classes_ = IntMatrix::from_columns(cols, r);

  if (!(omega_.transpose() == -omega_)) throw InvariantViolation("intersection pairing is not antisymmetric");
  if (!(omega_ * boundary_classes_).is_zero()) throw InvariantViolation("boundary classes are not in the radical");

  const SmithForm snf = smith_normal_form(boundary_classes_);
  const std::size_t s = snf.rank();
  const auto diag = snf.diagonal();
  for (std::size_t i = 0; i < s; ++i)
    if (diag[i] != 1) throw InvariantViolation("boundary classes do not span a primitive sublattice");
  closed_basis_ = select_columns(snf.U_inverse, s);
  projection_ = snf.U.block(s, 0, r - s, r);
  pairing_ = closed_basis_.transpose() * omega_ * closed_basis_;

  if (!(pairing_.transpose() == -pairing_)) throw InvariantViolation("closed pairing is not antisymmetric");
  if (pairing_.rows() > 0) {
    const Integer det = pairing_.determinant();
    if (det != 1 && det != -1) throw InvariantViolation("closed pairing is degenerate (det " + det.get_str() + ")");
  }
  if (static_cast<long>(pairing_.rows()) != 2L * genus()) throw InvariantViolation("closed rank differs from twice the genus");
}

std::string RibbonCover::id() const {
  if (level_ == 0) return "R" + std::to_string(base_.rank());
  return "q" + std::to_string(q_) + "-level" + std::to_string(level_);
}

std::optional<IntMatrix> RibbonCover::closed_map(const IntMatrix& m) const {
  const IntMatrix pm = projection_ * m;
  if (!(pm * boundary_classes_).is_zero()) return std::nullopt;
  return pm * closed_basis_;
}

nlohmann::json RibbonCover::to_json() const {
  nlohmann::json j;
  j["cover"] = id();
  j["rotation"] = base_.str();
  j["degree"] = cover_.degree();
  j["euler_characteristic"] = euler_characteristic();
  j["genus"] = genus();
  j["boundary"] = boundary_count();
  auto walks = nlohmann::json::array();
  for (const auto& w : walks_) walks.push_back({{"start", cover_.quotient().label(w.start)}, {"word", w.word.str()}});
  j["boundary_walks"] = walks;
  j["closed_rank"] = closed_rank();
  j["pairing"] = freecover::to_json(pairing_);
  return j;
}

RibbonCover closed_homology(const RibbonStructure& base, const BasedCover& cover, int q, int level) {
  return RibbonCover(base, cover, q, level);
}

std::vector<RibbonCover> ribbon_family(const RibbonStructure& base, const std::vector<int>& q_list, int depth,
                                       int max_vertices) {
  std::vector<int> qs = q_list;
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  std::vector<RibbonCover> family;
  family.emplace_back(base, BasedCover(FiniteQuotient::trivial(base.rank())), 0, 0);
  for (int q : qs) {
    CoverTower tower(base.rank(), q, max_vertices);
    for (int k = 1; k <= depth; ++k) {
      try {
        tower.extend();
      } catch (const BudgetExceeded&) {
        break;
      }
      family.emplace_back(base, tower.level(k).cover, q, k);
    }
  }
  return family;
}

// ---------------------------------------------------------------------------
// Elevations

ElevationSet elevations(const Word& x, const RibbonCover& rc) {
  if (x.empty()) throw InputError("elevations of the trivial word");
  const auto& cover = rc.cover();
  const int m = cover.quotient().element_order(cover.quotient().evaluate(x));
  const Word xm = power(x, m);
  ElevationSet out{x, m, cover.degree() / m, cycle_class(cover, xm), {}, {}};
  for (int g = 0; g < cover.degree(); ++g) out.orbit.push_back(rc.project(path_class(cover, g, xm)));
  out.basis = hermite_basis(out.orbit, static_cast<std::size_t>(rc.closed_rank()));
  return out;
}

bool is_isotropic(const ElevationSet& v, const RibbonCover& rc) {
  for (const auto& a : v.basis)
    for (const auto& b : v.basis)
      if (bilinear(a, rc.pairing(), b) != 0) return false;
  return true;
}

DisjointnessVerdict disjointness_search(const Word& x, const Word& y, const std::vector<RibbonCover>& family) {
  if (family.empty()) throw InputError("empty cover family");
  for (const auto& rc : family) {
    const auto ex = elevations(x, rc);
    const auto ey = elevations(y, rc);
    std::vector<IntVector> jy;
    for (const auto& b : ey.orbit) jy.push_back(rc.pairing() * b);
    for (std::size_t gx = 0; gx < ex.orbit.size(); ++gx) {
      for (std::size_t gy = 0; gy < jy.size(); ++gy) {
        const Integer value = dot(ex.orbit[gx], jy[gy]);
        if (value != 0) return {true, rc.id(), static_cast<int>(gx), static_cast<int>(gy), value};
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Intersection form

FormReport preserves_intersection_form(const Endomorphism& psi, const std::vector<RibbonCover>& family) {
  if (!is_surjective(psi)) throw PreconditionError(psi.str() + " is not an automorphism");
  FormReport report{psi.str(), {}, true};
  for (const auto& rc : family) {
    const auto& cover = rc.cover();
    CoverFormVerdict v{rc.id(), cover.degree(), rc.genus(), rc.boundary_count(), rc.pairing(), false, false, std::nullopt, ""};
    const auto lifted = rc.closed_map(lift_matrix(psi, cover));
    v.boundary_preserved = lifted.has_value();
    // Deck transformations preserve the boundary span, so without it no
    // composition descends to the closed surface.
    if (lifted) {
      for (int g = 0; g < cover.degree() && !v.passes; ++g) {
        IntMatrix m = *lifted;
        if (g != FiniteQuotient::identity()) {
          const auto deck = rc.closed_map(deck_matrix(cover, g));
          if (!deck) throw InvariantViolation("deck transformation does not preserve the boundary");
          m = *deck * m;
        }
        if (m.transpose() * rc.pairing() * m == rc.pairing()) {
          v.passes = true;
          v.deck_witness = g;
          v.deck_label = cover.quotient().label(g);
        }
      }
    }
    report.all_pass = report.all_pass && v.passes;
    report.covers.push_back(std::move(v));
  }
  return report;
}

nlohmann::json to_json(const ElevationSet& v) {
  nlohmann::json j;
  j["x"] = v.x.str();
  j["order"] = v.order;
  j["elevations"] = v.elevation_count;
  j["preferred"] = to_json(v.preferred);
  auto basis = nlohmann::json::array();
  for (const auto& b : v.basis) basis.push_back(to_json(b));
  j["basis"] = basis;
  return j;
}

nlohmann::json to_json(const DisjointnessVerdict& v) {
  if (!v.witnessed) return {{"verdict", "no witness in family"}};
  return {{"verdict", "intersection witnessed"}, {"cover", *v.cover}, {"deck_x", v.deck_x}, {"deck_y", v.deck_y},
          {"value", to_json(v.value)}};
}

nlohmann::json to_json(const FormReport& r) {
  nlohmann::json j;
  j["automorphism"] = r.automorphism;
  auto covers = nlohmann::json::array();
  for (const auto& c : r.covers) {
    covers.push_back({{"cover", c.cover},
                      {"degree", c.degree},
                      {"genus", c.genus},
                      {"boundary", c.boundary},
                      {"pairing", to_json(c.pairing)},
                      {"boundary_preserved", c.boundary_preserved},
                      {"verdict", c.passes ? "pass" : "fail"},
                      {"deck_witness", c.deck_witness ? nlohmann::json(c.deck_label) : nlohmann::json(nullptr)}});
  }
  j["covers"] = covers;
  j["all_pass"] = r.all_pass;
  return j;
}

}  // namespace freecover
