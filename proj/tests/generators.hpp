#pragma once

#include <cstdint>
#include <vector>

#include "nbtrace/regular_graph.hpp"
#include "nbtrace/rng.hpp"
#include "nbtrace/word.hpp"
#include "nbtrace/word_map.hpp"

namespace gen {

using nbtrace::Engine;
using nbtrace::Letter;
using nbtrace::Word;

inline int uniform_int(Engine& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Raw letter sequence, possibly unreduced.
inline std::vector<Letter> raw_letters(Engine& rng, int rank, int max_len) {
  std::vector<Letter> out(static_cast<std::size_t>(uniform_int(rng, 0, max_len)));
  for (auto& l : out) l = Letter::from_index(uniform_int(rng, 0, 2 * rank - 1));
  return out;
}

inline Word reduced_word(Engine& rng, int rank, int max_len) {
  auto raw = raw_letters(rng, rank, max_len);
  return Word::from_letters(raw, rank);
}

// Uniform over reduced words of exactly `len` letters.
inline Word reduced_word_exact(Engine& rng, int rank, int len) {
  std::vector<Letter> out;
  while (static_cast<int>(out.size()) < len) {
    Letter l = Letter::from_index(uniform_int(rng, 0, 2 * rank - 1));
    if (!out.empty() && l == out.back().inverse()) continue;
    out.push_back(l);
  }
  return Word::from_letters(out, rank);
}

inline Word cyclic_word_exact(Engine& rng, int rank, int len) {
  while (true) {
    Word w = reduced_word_exact(rng, rank, len);
    if (nbtrace::is_cyclically_reduced(w)) return w;
  }
}

inline nbtrace::PermutationTuple tuple(Engine& rng, std::uint32_t n, int k) {
  return nbtrace::PermutationTuple::random(n, k, rng);
}

}  // namespace gen
