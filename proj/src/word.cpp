#include "freecover/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "freecover/error.hpp"

namespace freecover {

namespace {

void check_rank(int rank) {
  if (rank < 2) throw InputError("rank must be at least 2, got " + std::to_string(rank));
}

void check_same_rank(const Word& a, const Word& b) {
  if (a.rank() != b.rank()) {
    throw InputError("rank mismatch: " + std::to_string(a.rank()) + " vs " +
                     std::to_string(b.rank()));
  }
}

}  // namespace

std::vector<Letter> free_reduce(int rank, std::span<const Letter> raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (Letter l : raw) {
    if (l == 0 || std::abs(l) > rank) {
      throw InputError("generator index " + std::to_string(l) + " out of range 1.." +
                       std::to_string(rank));
    }
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word::Word(int rank) : rank_(rank) { check_rank(rank); }

Word::Word(int rank, std::span<const Letter> letters)
    : rank_(rank), letters_(free_reduce(rank, letters)) {
  check_rank(rank);
}

Word::Word(int rank, std::initializer_list<Letter> letters)
    : Word(rank, std::span<const Letter>(letters.begin(), letters.size())) {}

Word Word::generator(int rank, int index) { return Word(rank, {index}); }

Word Word::parse(std::string_view text, int rank) {
  check_rank(rank);
  std::vector<Letter> raw;
  std::size_t i = 0;
  bool saw_identity = false;
  auto fail = [&](const std::string& why) -> InputError {
    return InputError("cannot parse word '" + std::string(text) + "': " + why);
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '1') {
      saw_identity = true;
      ++i;
      continue;
    }
    if (c == 'x' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      std::size_t j = i + 1;
      int index = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        index = index * 10 + (text[j] - '0');
        if (index > 100000) throw fail("generator index too large");
        ++j;
      }
      int sign = 1;
      if (text.substr(j, 3) == "^-1") {
        sign = -1;
        j += 3;
      }
      if (index < 1 || index > rank) throw fail("generator x" + std::to_string(index) + " not in rank " + std::to_string(rank));
      raw.push_back(sign * index);
      i = j;
      continue;
    }
    if (std::islower(static_cast<unsigned char>(c)) || std::isupper(static_cast<unsigned char>(c))) {
      const bool upper = std::isupper(static_cast<unsigned char>(c));
      const int index = (upper ? c - 'A' : c - 'a') + 1;
      if (index > rank) throw fail(std::string("letter '") + c + "' exceeds rank " + std::to_string(rank));
      raw.push_back(upper ? -index : index);
      ++i;
      continue;
    }
    throw fail(std::string("unexpected character '") + c + "'");
  }
  if (saw_identity && !raw.empty()) throw fail("'1' cannot be mixed with letters");
  if (!saw_identity && raw.empty()) throw fail("empty input (write 1 for the identity)");
  return Word(rank, raw);
}

bool Word::is_cyclically_reduced() const noexcept {
  return letters_.size() < 2 || letters_.front() != -letters_.back();
}

std::string Word::str() const {
  if (letters_.empty()) return "1";
  std::string out;
  for (Letter l : letters_) {
    const int index = std::abs(l);
    if (index <= 26) {
      out.push_back(static_cast<char>((l > 0 ? 'a' : 'A') + index - 1));
    } else {
      out += "x" + std::to_string(index);
      if (l < 0) out += "^-1";
    }
  }
  return out;
}

Word multiply(const Word& a, const Word& b) {
  check_same_rank(a, b);
  std::vector<Letter> raw = a.letters();
  raw.insert(raw.end(), b.letters().begin(), b.letters().end());
  return Word(a.rank(), raw);
}

Word operator*(const Word& a, const Word& b) { return multiply(a, b); }

Word invert(const Word& a) {
  std::vector<Letter> raw(a.letters().rbegin(), a.letters().rend());
  for (Letter& l : raw) l = -l;
  return Word(a.rank(), raw);
}

Word commutator(const Word& a, const Word& b) {
  check_same_rank(a, b);
  return invert(a) * invert(b) * a * b;
}

Word commutator(std::span<const Word> words) {
  if (words.empty()) throw InputError("commutator of an empty list");
  Word acc = words.front();
  for (std::size_t i = 1; i < words.size(); ++i) acc = commutator(acc, words[i]);
  return acc;
}

Word power(const Word& a, long k) {
  const Word base = k < 0 ? invert(a) : a;
  std::vector<Letter> raw;
  const long reps = k < 0 ? -k : k;
  raw.reserve(base.length() * static_cast<std::size_t>(reps));
  for (long r = 0; r < reps; ++r) raw.insert(raw.end(), base.letters().begin(), base.letters().end());
  return Word(a.rank(), raw);
}

CyclicReduction cyclic_reduce(const Word& a) {
  const auto& l = a.letters();
  std::size_t lo = 0;
  std::size_t hi = l.size();
  while (hi - lo >= 2 && l[lo] == -l[hi - 1]) {
    ++lo;
    --hi;
  }
  // a = u core u^-1 with u = l[0, lo); the conjugator is u^-1.
  std::vector<Letter> core(l.begin() + static_cast<long>(lo), l.begin() + static_cast<long>(hi));
  std::vector<Letter> u(l.begin(), l.begin() + static_cast<long>(lo));
  return {Word(a.rank(), core), invert(Word(a.rank(), u))};
}

std::vector<long> abelianize(const Word& w) {
  std::vector<long> v(static_cast<std::size_t>(w.rank()), 0);
  for (Letter l : w.letters()) v[static_cast<std::size_t>(std::abs(l) - 1)] += l > 0 ? 1 : -1;
  return v;
}

Endomorphism::Endomorphism(std::vector<Word> images)
    : rank_(images.empty() ? 0 : images.front().rank()), images_(std::move(images)) {
  if (images_.empty()) throw InputError("endomorphism needs at least one image");
  if (static_cast<int>(images_.size()) != rank_) {
    throw InputError("endomorphism of rank " + std::to_string(rank_) + " needs " +
                     std::to_string(rank_) + " images, got " + std::to_string(images_.size()));
  }
  for (const Word& w : images_) {
    if (w.rank() != rank_) throw InputError("endomorphism images have mismatched ranks");
  }
}

Endomorphism Endomorphism::identity(int rank) {
  std::vector<Word> images;
  for (int i = 1; i <= rank; ++i) images.push_back(Word::generator(rank, i));
  return Endomorphism(std::move(images));
}

Endomorphism Endomorphism::parse(std::string_view text, int rank) {
  std::vector<Word> images;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    images.push_back(Word::parse(text.substr(start, comma - start), rank));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (static_cast<int>(images.size()) != rank) {
    throw InputError("endomorphism '" + std::string(text) + "' has " + std::to_string(images.size()) +
                     " images but rank is " + std::to_string(rank));
  }
  return Endomorphism(std::move(images));
}

Endomorphism Endomorphism::inner(const Word& w) {
  std::vector<Word> images;
  const Word wi = invert(w);
  for (int i = 1; i <= w.rank(); ++i) images.push_back(wi * Word::generator(w.rank(), i) * w);
  return Endomorphism(std::move(images));
}

Word Endomorphism::apply(const Word& w) const {
  if (w.rank() != rank_) {
    throw InputError("rank mismatch applying endomorphism of rank " + std::to_string(rank_) +
                     " to a word of rank " + std::to_string(w.rank()));
  }
  std::vector<Letter> raw;
  for (Letter l : w.letters()) {
    const auto& img = images_[static_cast<std::size_t>(std::abs(l) - 1)].letters();
    if (l > 0) {
      raw.insert(raw.end(), img.begin(), img.end());
    } else {
      for (auto it = img.rbegin(); it != img.rend(); ++it) raw.push_back(-*it);
    }
  }
  return Word(rank_, raw);
}

std::string Endomorphism::str() const {
  std::string out;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) out += ",";
    out += images_[i].str();
  }
  return out;
}

Endomorphism compose(const Endomorphism& phi, const Endomorphism& psi) {
  if (phi.rank() != psi.rank()) throw InputError("cannot compose endomorphisms of different rank");
  std::vector<Word> images;
  for (const Word& w : psi.images()) images.push_back(phi.apply(w));
  return Endomorphism(std::move(images));
}

namespace nielsen {

Endomorphism right_multiply(int rank, int i, int j) {
  if (i == j) throw InputError("Nielsen move x_i -> x_i x_j needs i != j");
  std::vector<Word> images = Endomorphism::identity(rank).images();
  images.at(static_cast<std::size_t>(i - 1)) = Word(rank, {i, j});
  return Endomorphism(std::move(images));
}

Endomorphism invert_generator(int rank, int i) {
  std::vector<Word> images = Endomorphism::identity(rank).images();
  images.at(static_cast<std::size_t>(i - 1)) = Word(rank, {-i});
  return Endomorphism(std::move(images));
}

Endomorphism swap(int rank, int i, int j) {
  std::vector<Word> images = Endomorphism::identity(rank).images();
  std::swap(images.at(static_cast<std::size_t>(i - 1)), images.at(static_cast<std::size_t>(j - 1)));
  return Endomorphism(std::move(images));
}

std::vector<Endomorphism> generating_set(int rank) {
  std::vector<Endomorphism> gens;
  for (int j = 2; j <= rank; ++j) gens.push_back(swap(rank, 1, j));
  gens.push_back(invert_generator(rank, 1));
  if (rank >= 2) gens.push_back(right_multiply(rank, 1, 2));
  return gens;
}

}  // namespace nielsen

}  // namespace freecover
