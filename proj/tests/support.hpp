#pragma once

// Independent oracles and random generators shared by the test binaries.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "freecover/word.hpp"

namespace freecover::testing {

/// Cancels the first adjacent inverse pair and rescans from the start.
inline std::vector<Letter> naive_reduce(std::vector<Letter> ls) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
      if (ls[i] == -ls[i + 1]) {
        ls.erase(ls.begin() + static_cast<long>(i), ls.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return ls;
}

inline Word random_word(std::mt19937_64& rng, int rank, int length) {
  std::uniform_int_distribution<int> pick(1, 2 * rank);
  std::vector<Letter> ls;
  while (static_cast<int>(ls.size()) < length) {
    const int v = pick(rng);
    const Letter l = v <= rank ? v : -(v - rank);
    if (!ls.empty() && ls.back() == -l) continue;
    ls.push_back(l);
  }
  return Word(rank, ls);
}

inline Word random_word_upto(std::mt19937_64& rng, int rank, int min_length, int max_length) {
  std::uniform_int_distribution<int> len(min_length, max_length);
  return random_word(rng, rank, len(rng));
}

inline Endomorphism random_endomorphism(std::mt19937_64& rng, int rank, int max_length) {
  std::vector<Word> images;
  for (int i = 0; i < rank; ++i) images.push_back(random_word_upto(rng, rank, 0, max_length));
  return Endomorphism(std::move(images));
}

/// Random product of Nielsen generators.
inline Endomorphism random_automorphism(std::mt19937_64& rng, int rank, int max_factors) {
  const auto gens = nielsen::generating_set(rank);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::uniform_int_distribution<int> count(1, max_factors);
  Endomorphism phi = Endomorphism::identity(rank);
  for (int i = count(rng); i > 0; --i) phi = compose(gens[pick(rng)], phi);
  return phi;
}


/// Elements of <gens> reachable from 1 by multiplying with generators or
/// inverses while every intermediate product stays within `max_length`.
inline std::set<std::vector<Letter>> products_within(const std::vector<Word>& gens, std::size_t max_length) {
  std::vector<Word> alphabet;
  for (const auto& g : gens) {
    alphabet.push_back(g);
    alphabet.push_back(invert(g));
  }
  const int rank = gens.front().rank();
  std::set<std::vector<Letter>> seen{{}};
  std::vector<Word> frontier{Word(rank)};
  while (!frontier.empty()) {
    std::vector<Word> next;
    for (const auto& w : frontier) {
      for (const auto& a : alphabet) {
        Word p = w * a;
        if (p.length() <= max_length && seen.insert(p.letters()).second) next.push_back(std::move(p));
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

/// Magnus expansion by full polynomial multiplication of per-letter series,
/// keyed by digit strings ("12" is X1X2). Independent of the library code.
inline std::map<std::string, long long> symbolic_magnus(const Word& w, int cap) {
  using Poly = std::map<std::string, long long>;
  auto mul = [cap](const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
      for (const auto& [mb, cb] : b)
        if (static_cast<int>(ma.size() + mb.size()) <= cap) out[ma + mb] += ca * cb;
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
  };
  Poly acc{{"", 1}};
  for (Letter l : w.letters()) {
    const std::string x(1, static_cast<char>('0' + std::abs(l)));
    Poly factor{{"", 1}};
    if (l > 0) {
      factor[x] = 1;
    } else {
      std::string m;
      long long sign = 1;
      for (int j = 1; j <= cap; ++j) {
        m += x;
        sign = -sign;
        factor[m] = sign;
      }
    }
    acc = mul(acc, factor);
  }
  return acc;
}

}  // namespace freecover::testing
