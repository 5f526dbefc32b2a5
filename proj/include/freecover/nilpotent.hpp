#pragma once

// Lower central series arithmetic through the truncated Magnus expansion
// x_i -> 1 + X_i, and the bundled evidence for the conjugating endomorphism
// that is onto every nilpotent quotient without being onto F_n.

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freecover/homology.hpp"
#include "freecover/int_matrix.hpp"
#include "freecover/word.hpp"

namespace freecover {

inline constexpr int kDefaultMagnusCap = 6;
inline constexpr int kMaxMagnusCap = 8;

using Monomial = std::vector<int>;

/// Element of Z<<X_1..X_n>> modulo monomials of degree > cap. Zero
/// coefficients are never stored.
class TruncatedSeries {
 public:
  TruncatedSeries(int rank, int cap);

  static TruncatedSeries one(int rank, int cap);

  int rank() const noexcept { return rank_; }
  int cap() const noexcept { return cap_; }
  const std::map<Monomial, Integer>& coefficients() const noexcept { return terms_; }
  Integer coefficient(const Monomial& m) const;
  void add(const Monomial& m, const Integer& c);

  bool is_one() const;
  /// Smallest degree >= 1 with a nonzero coefficient, if any.
  std::optional<int> lowest_nonconstant_degree() const;

  /// Sorted by degree then lexicographically: "1 + X1X2 - X2X1".
  std::string str() const;

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  int rank_;
  int cap_;
  std::map<Monomial, Integer> terms_;
};

/// Magnus image of w truncated at degree cap (1 <= cap <= kMaxMagnusCap).
TruncatedSeries magnus(const Word& w, int cap);

/// u == v modulo F^(k+1), the (k+1)-st lower central series term.
bool congruent_mod_lcs(const Word& u, const Word& v, int k);

/// Left-normed commutators [x_i1, ..., x_ik] over all index tuples with
/// i1 != i2 (for k = 1, the generators). They span F^(k)/F^(k+1).
std::vector<Word> left_normed_commutators(int rank, int k);

/// phi(w) == w mod F^(k+1) for every sample w; each sample must lie in F^(k)
/// (PreconditionError otherwise).
bool acts_trivially_on_lcs_quotient(const Endomorphism& phi, int k, const std::vector<Word>& sample);

/// Surjectivity on F/F^(k), decided on the abelianization (k >= 2).
bool is_epi_on_nilpotent_quotient(const Endomorphism& phi, int k);

/// x_n ... x_1 x_n^-2 ... x_1^-2.
Word witness_alpha(int rank);
/// The other exponent pattern: x_n ... x_1 x_n^-2, then x_i^2 for
/// i = n-1 down to 3, then x_2^-1 when n >= 3, then x_1^-1. For n = 2 this
/// is x2 x1 x2^-2 x1^-1.
Word witness_alpha_variant(int rank);
/// x_1 -> alpha^-1 x_1 alpha, other generators fixed.
Endomorphism conjugating_endomorphism(const Word& alpha);

struct WitnessOptions {
  int nilpotent_cap = kDefaultMagnusCap;
  SearchOptions search;
  bool use_variant = false;
};

struct WitnessReport {
  int rank;
  Word alpha;
  Endomorphism phi;
  bool surjective;
  /// (k, epi on F/F^(k)) for 2 <= k <= cap.
  std::vector<std::pair<int, bool>> nilpotent_epi;
  /// (k, acts trivially on F^(k)/F^(k+1)) for 1 <= k <= min(cap, 3).
  std::vector<std::pair<int, bool>> lcs_trivial;
  Word test_word;  ///< phi(x1 x2), cyclically reduced
  bool whitehead_connected;
  std::vector<int> whitehead_cut_vertices;
  bool not_separable_certified;
  bool alpha_graph_contained;  ///< every edge of Wh(alpha) occurs in Wh(phi(x1x2))
  std::optional<int> whitehead_minimal_length;  ///< nullopt when beyond the cost guard
  CertificateSearch certificate;
};

WitnessReport conjugation_witness(int rank, const WitnessOptions& options = {});

nlohmann::json to_json(const WitnessReport& r);

}  // namespace freecover
