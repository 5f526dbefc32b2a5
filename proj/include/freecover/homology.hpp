#pragma once

// H_1 of finite covers of R_n in the cycle basis of the spanning tree:
// deck-group matrices, based lifts of endomorphisms, and the bounded search
// for covers on which an endomorphism fails to act by epimorphisms.

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "freecover/covers.hpp"
#include "freecover/int_matrix.hpp"
#include "freecover/word.hpp"

namespace freecover {

/// Signed count of traversals of each non-tree edge along the path spelled by
/// `w` from `start`. The path need not close up.
IntVector path_class(const BasedCover& cover, int start, const Word& w);

/// Homology class of a loop at the basepoint; throws PreconditionError if w
/// is not in pi_1(X).
IntVector cycle_class(const BasedCover& cover, const Word& w);

/// Matrix of the deck transformation h -> g h. Column e is the class of the
/// translate of the basis cycle e, i.e. the path from g reading w_e.
IntMatrix deck_matrix(const BasedCover& cover, int g);

/// Based lift of phi: column e is cycle_class(phi(w_e)). Throws
/// PreconditionError when ker Psi is not phi-invariant.
IntMatrix lift_matrix(const Endomorphism& phi, const BasedCover& cover);

/// The spanning-tree basis is a Z-basis, so on the trivial cover this is the
/// abelianization matrix of phi (column i = exponent sums of phi(x_i)).
IntMatrix abelianization_matrix(const Endomorphism& phi);

/// True iff M_phi commutes with every deck matrix. Requires phi to be an
/// automorphism (PreconditionError otherwise).
bool equivariance_check(const Endomorphism& phi, const BasedCover& cover);

/// M_phi M_g == M_{phi(g)} M_phi for every g, phi(g) the induced map on Gamma.
bool twisted_equivariance_holds(const Endomorphism& phi, const BasedCover& cover);

enum class CertificateGoal { kNonEpimorphism, kNontrivial };
std::string to_string(CertificateGoal goal);

struct SearchOptions {
  std::vector<int> q_list{2, 3};
  int depth = 2;
  int max_vertices = kDefaultMaxVertices;
  CertificateGoal goal = CertificateGoal::kNonEpimorphism;
};

/// One cover visited by the search. Level 0 is R_n itself.
struct SearchedCover {
  int q;
  int level;
  int degree;
  int rank;
  bool epi;
  bool identity;
};

struct Certificate {
  std::string endomorphism;
  int q;
  int level;
  int cover_degree;
  IntMatrix matrix;
  IntVector snf_diagonal;
  std::string verdict;
};

struct CertificateSearch {
  std::optional<Certificate> certificate;
  std::vector<SearchedCover> searched;
  /// (q, level) pairs refused by the vertex budget.
  std::vector<std::pair<int, int>> budget_refusals;
};

/// Walks R_n and then the mod-q towers in (q ascending, level ascending)
/// order and stops at the first cover meeting the goal.
CertificateSearch find_nonsurjectivity_certificate(const Endomorphism& phi, const SearchOptions& options = {});

/// Small entries as JSON numbers, others as decimal strings.
nlohmann::json to_json(const Integer& x);
nlohmann::json to_json(const IntVector& v);
nlohmann::json to_json(const IntMatrix& m);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const CertificateSearch& s);

}  // namespace freecover
