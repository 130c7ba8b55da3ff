#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nbtrace/core_graph.hpp"
#include "nbtrace/word.hpp"

namespace nbtrace {

// Type-II Whitehead automorphism of F_r determined by a multiplier letter a:
// every other generator x goes to one of x, x a, a^-1 x, a^-1 x a; a is fixed.
struct WhiteheadMove {
  enum class Action : std::uint8_t { fix, right_multiply, left_multiply_inverse, conjugate };

  int rank = 1;
  Letter multiplier;
  std::vector<Action> actions;  // indexed by generator - 1

  Word image_of_generator(int generator) const;
  Word apply(const Word& w) const;
};

// All non-trivial type-II moves of F_r: 2r multipliers times 4^(r-1) - 1
// action patterns. Order: multiplier a, A, b, B, ...; actions as base-4 digits
// with the lowest generator most significant.
std::vector<WhiteheadMove> whitehead_moves(int rank);
std::uint64_t whitehead_move_count(int rank);

// Whitehead descent on the cyclic length: w is primitive in F_r iff greedy
// strictly-shortening moves reach cyclic length 1. Rank 1 is the base case
// "w = y^{+-1}".
bool is_primitive(const Word& w, int rank);
bool is_primitive(const Word& w);

// pi(w) in {0, 1, ..., k} or infinity.
struct PrimitivityRank {
  static constexpr int kInfinite = -1;
  int value = kInfinite;

  bool finite() const { return value != kInfinite; }
  bool operator==(const PrimitivityRank&) const = default;
  std::string to_string() const { return finite() ? std::to_string(value) : "inf"; }
};

struct WordClassification {
  Word word;
  PrimitivityRank pi;
  std::vector<CoreGraph> crit;  // distinct critical subgroups; empty for w = 1

  std::size_t crit_size() const { return crit.size(); }
};

struct ClassifyOptions {
  int vertex_cap = kDefaultQuotientCap;
  // Randomizes the spanning tree used to rewrite w inside each subgroup.
  std::optional<std::uint64_t> tie_break_seed;
  // Used by batch classification; 0 defers to resolve_workers().
  int workers = 0;
};

// pi(w) and Crit(w) by scanning the folded quotients of the core graph of the
// cyclic reduction of w. The empty word gets pi = 0 and no critical subgroups.
WordClassification primitivity_rank(const Word& w, const ClassifyOptions& options = {});

bool is_proper_power(const Word& w);

enum class WordDomain { cyclically_reduced, reduced };

// Smallest image of the cyclic reduction of w under rotations, inversion and
// signed permutations of generators. pi and |Crit| are constant on these orbits.
Word orbit_representative(const Word& w);

// Sum of |Crit(w)| over words of length t with pi(w) = m.
std::uint64_t crit_sum(int rank, int length, int m, WordDomain domain = WordDomain::cyclically_reduced,
                       const ClassifyOptions& options = {});

// Per-word summary kept by `ClassificationCache`.
struct ClassSummary {
  PrimitivityRank pi;
  std::size_t crit_size = 0;
  std::vector<std::string> crit_forms;  // canonical forms for the orbit representative
};

// Memoizes classification by orbit representative. Not thread-safe while
// filling; concurrent `lookup` after `fill` is safe.
class ClassificationCache {
 public:
  explicit ClassificationCache(ClassifyOptions options = {}) : options_(options) {}

  const ClassSummary& classify(const Word& w);
  // Classifies all words up front, optionally on several workers.
  void fill(const std::vector<Word>& words, int workers);
  const ClassSummary* lookup(const Word& w) const;
  std::size_t size() const { return entries_.size(); }

 private:
  ClassifyOptions options_;
  std::vector<std::pair<Word, ClassSummary>> entries_;  // sorted by representative
};

}  // namespace nbtrace
