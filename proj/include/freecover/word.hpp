#pragma once

// Reduced words in the free group F_n = F<x1, ..., xn> and endomorphisms of
// F_n given by the images of the basis.

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace freecover {

/// A signed generator: +i stands for x_i, -i for x_i^-1 (i >= 1).
using Letter = int;

/// Freely reduced word of F_n. Immutable; every constructor reduces.
class Word {
 public:
  /// The empty word of rank n.
  explicit Word(int rank);
  /// Reduces `letters`; throws InputError if an index lies outside 1..rank.
  Word(int rank, std::span<const Letter> letters);
  Word(int rank, std::initializer_list<Letter> letters);

  static Word generator(int rank, int index);
  /// Parses the compact text form (`aB`, `x1x2^-1`, `1` for the identity).
  static Word parse(std::string_view text, int rank);

  int rank() const noexcept { return rank_; }
  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  bool is_cyclically_reduced() const noexcept;

  std::string str() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  int rank_;
  std::vector<Letter> letters_;
};

/// Free reduction of a raw letter sequence; throws on out-of-range indices.
std::vector<Letter> free_reduce(int rank, std::span<const Letter> raw);

Word multiply(const Word& a, const Word& b);
Word operator*(const Word& a, const Word& b);
Word invert(const Word& a);
/// [a, b] = a^-1 b^-1 a b.
Word commutator(const Word& a, const Word& b);
/// Left-normed iterated commutator [w1, w2, ..., wk] = [[w1, w2], ..., wk].
Word commutator(std::span<const Word> words);
Word power(const Word& a, long k);

struct CyclicReduction {
  Word core;
  Word conjugator;  ///< input == conjugator^-1 * core * conjugator
};
CyclicReduction cyclic_reduce(const Word& a);

/// Exponent sum of each generator (the image in H_1(R_n; Z) = Z^n).
std::vector<long> abelianize(const Word& w);

/// Endomorphism of F_n determined by the images of x_1, ..., x_n.
class Endomorphism {
 public:
  explicit Endomorphism(std::vector<Word> images);

  static Endomorphism identity(int rank);
  /// Comma separated images: "ab,b" is x1 -> x1x2, x2 -> x2.
  static Endomorphism parse(std::string_view text, int rank);
  /// Conjugation x -> w^-1 x w.
  static Endomorphism inner(const Word& w);

  int rank() const noexcept { return rank_; }
  const std::vector<Word>& images() const noexcept { return images_; }
  const Word& image(int index) const { return images_.at(index - 1); }

  Word apply(const Word& w) const;
  Word operator()(const Word& w) const { return apply(w); }

  std::string str() const;

  friend bool operator==(const Endomorphism&, const Endomorphism&) = default;

 private:
  int rank_;
  std::vector<Word> images_;
};

/// (phi o psi)(x) = phi(psi(x)).
Endomorphism compose(const Endomorphism& phi, const Endomorphism& psi);

/// Elementary Nielsen automorphisms generating Aut(F_n).
namespace nielsen {
/// x_i -> x_i x_j (i != j), others fixed.
Endomorphism right_multiply(int rank, int i, int j);
/// x_i -> x_i^-1.
Endomorphism invert_generator(int rank, int i);
/// Swaps x_i and x_j.
Endomorphism swap(int rank, int i, int j);
/// A finite generating set of Aut(F_n).
std::vector<Endomorphism> generating_set(int rank);
}  // namespace nielsen

}  // namespace freecover
