#pragma once

// Ribbon structures on R_n, their lifts to finite regular covers, the
// intersection pairing on H_1 of the capped-off covering surface, elevation
// lattices V_x, and the intersection-form test for automorphisms.

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "freecover/covers.hpp"
#include "freecover/int_matrix.hpp"
#include "freecover/word.hpp"

namespace freecover {

/// A closed walk around one boundary component, starting at `start`.
struct BoundaryWalk {
  int start;
  Word word;
};

/// Cyclic order of the 2n half-edges at the vertex of R_n. Half-edge l is
/// where one leaves the vertex reading l, so "a" is the start of the x1-edge
/// and "A" its end.
class RibbonStructure {
 public:
  RibbonStructure(int rank, std::vector<Letter> rotation);
  /// Whitespace-separated letters, e.g. "a b A B".
  static RibbonStructure parse(const std::string& text);

  int rank() const noexcept { return rank_; }
  const std::vector<Letter>& rotation() const noexcept { return rotation_; }
  /// Half-edge following l counterclockwise.
  Letter next(Letter l) const;
  int position(Letter l) const;

  /// Peripheral words: boundary walks of the thickened rose.
  const std::vector<Word>& boundary_words() const noexcept { return boundary_; }
  int boundary_count() const noexcept { return static_cast<int>(boundary_.size()); }
  int euler_characteristic() const noexcept { return 1 - rank_; }
  int genus() const noexcept { return (2 - euler_characteristic() - boundary_count()) / 2; }

  std::string str() const;

 private:
  int rank_;
  std::vector<Letter> rotation_;
  std::vector<int> position_;
  std::vector<Word> boundary_;
};

RibbonStructure rose_ribbon(int rank, const std::vector<Letter>& rotation);

/// A finite regular cover with the lifted rotation system.
class RibbonCover {
 public:
  /// `q` and `level` only label the cover (0, 0 for R_n itself).
  RibbonCover(RibbonStructure base, BasedCover cover, int q = 0, int level = 0);

  const RibbonStructure& base() const noexcept { return base_; }
  const BasedCover& cover() const noexcept { return cover_; }
  int q() const noexcept { return q_; }
  int level() const noexcept { return level_; }
  std::string id() const;

  long euler_characteristic() const noexcept { return static_cast<long>(cover_.degree()) * base_.euler_characteristic(); }
  const std::vector<BoundaryWalk>& boundary_walks() const noexcept { return walks_; }
  int boundary_count() const noexcept { return static_cast<int>(walks_.size()); }
  int genus() const noexcept { return static_cast<int>((2 - euler_characteristic() - boundary_count()) / 2); }

  /// Intersection pairing on H_1 of the surface with boundary, in the cycle basis.
  const IntMatrix& graph_pairing() const noexcept { return omega_; }
  /// Columns: homology classes of the boundary walks.
  const IntMatrix& boundary_classes() const noexcept { return boundary_classes_; }

  int closed_rank() const noexcept { return static_cast<int>(closed_basis_.cols()); }
  /// Columns: cycle-basis vectors whose images form a basis of H_1 of the closed surface.
  const IntMatrix& closed_basis() const noexcept { return closed_basis_; }
  /// Coordinates in closed_basis of the image of a cycle-basis vector.
  const IntMatrix& projection() const noexcept { return projection_; }
  /// Gram matrix of the intersection form on the closed surface.
  const IntMatrix& pairing() const noexcept { return pairing_; }

  IntVector project(const IntVector& x) const { return projection_ * x; }
  /// The map induced on closed homology, or nullopt when M does not
  /// preserve the span of the boundary classes.
  std::optional<IntMatrix> closed_map(const IntMatrix& m) const;

  nlohmann::json to_json() const;

 private:
  RibbonStructure base_;
  BasedCover cover_;
  int q_;
  int level_;
  std::vector<BoundaryWalk> walks_;
  IntMatrix omega_;
  IntMatrix boundary_classes_;
  IntMatrix closed_basis_;
  IntMatrix projection_;
  IntMatrix pairing_;
};

/// Builds the capped-off homology and pairing; throws InvariantViolation if
/// the pairing is not unimodular and antisymmetric.
RibbonCover closed_homology(const RibbonStructure& base, const BasedCover& cover, int q = 0, int level = 0);

/// R_n itself followed by the mod-q tower levels 1..depth for each q, skipping
/// levels refused by the vertex budget.
std::vector<RibbonCover> ribbon_family(const RibbonStructure& base, const std::vector<int>& q_list, int depth,
                                       int max_vertices = kDefaultMaxVertices);

struct ElevationSet {
  Word x;
  int order;  ///< m, the order of Psi(x)
  int elevation_count;  ///< |Gamma| / m
  IntVector preferred;  ///< class of x^m at the basepoint, cycle basis
  /// Closed-surface classes of the deck translates, deck elements in order.
  std::vector<IntVector> orbit;
  /// Hermite basis of V_x in closed coordinates.
  std::vector<IntVector> basis;
};

ElevationSet elevations(const Word& x, const RibbonCover& rc);

bool is_isotropic(const ElevationSet& v, const RibbonCover& rc);

struct DisjointnessVerdict {
  bool witnessed = false;
  std::optional<std::string> cover;
  int deck_x = 0;  ///< deck element translating the x elevation
  int deck_y = 0;
  Integer value = 0;
};

/// First pair of elevation classes with nonzero intersection, searching the
/// family in order.
DisjointnessVerdict disjointness_search(const Word& x, const Word& y, const std::vector<RibbonCover>& family);

struct CoverFormVerdict {
  std::string cover;
  int degree;
  int genus;
  int boundary;
  IntMatrix pairing;
  bool boundary_preserved;
  bool passes;
  std::optional<int> deck_witness;
  std::string deck_label;
};

struct FormReport {
  std::string automorphism;
  std::vector<CoverFormVerdict> covers;
  bool all_pass;
};

/// For each cover, looks for a deck element g (in element order) with
/// (M_g M_psi)^T J (M_g M_psi) = J on closed homology. Throws
/// PreconditionError when psi is not an automorphism or a cover is not
/// psi-invariant.
FormReport preserves_intersection_form(const Endomorphism& psi, const std::vector<RibbonCover>& family);

nlohmann::json to_json(const ElevationSet& v);
nlohmann::json to_json(const DisjointnessVerdict& v);
nlohmann::json to_json(const FormReport& r);

}  // namespace freecover
