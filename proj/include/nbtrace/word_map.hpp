#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nbtrace/primitivity.hpp"
#include "nbtrace/rng.hpp"
#include "nbtrace/word.hpp"

namespace nbtrace {

using Permutation = std::vector<std::uint32_t>;  // images of 0..n-1

// k permutations of the same ground set {0..n-1}.
class PermutationTuple {
 public:
  PermutationTuple(std::uint32_t n, std::vector<Permutation> perms);

  static PermutationTuple identity(std::uint32_t n, int k);
  static PermutationTuple random(std::uint32_t n, int k, Engine& rng);

  std::uint32_t n() const { return n_; }
  int k() const { return static_cast<int>(perms_.size()); }
  const Permutation& operator[](int generator) const {  // generator is 1-based
    return perms_[static_cast<std::size_t>(generator - 1)];
  }
  const Permutation& inverse(int generator) const {
    return inverses_[static_cast<std::size_t>(generator - 1)];
  }

 private:
  std::uint32_t n_;
  std::vector<Permutation> perms_;
  std::vector<Permutation> inverses_;
};

bool is_permutation(const Permutation& p);

// w(sigma) composed left to right: the first letter acts first, so
// evaluate(x1 x2)(i) = sigma_2(sigma_1(i)). Inverse letters use sigma_j^-1.
Permutation evaluate(const Word& w, const PermutationTuple& tuple);
std::uint32_t fixed_points(const Word& w, const PermutationTuple& tuple);

struct ExpectationEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  bool exact = false;
  // Exact mean as a reduced fraction (only when `exact`).
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
};

class ExactBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Covers n <= 6 for two generators and n <= 5 for three.
inline constexpr std::uint64_t kDefaultExactBudget = 2'000'000;

// Averages the fixed points of w over every tuple in S_n^g, where g is the
// number of distinct generators that occur in w (the others do not affect
// w(sigma)). Throws ExactBudgetExceeded when (n!)^g > budget.
ExpectationEstimate exact_expectation(const Word& w, std::uint32_t n,
                                      std::uint64_t budget = kDefaultExactBudget);

// Mean and standard error over `trials` independent uniform tuples. Trial i
// draws from derive_seed(seed, "wordmap", i), so the result does not depend on
// the worker count.
ExpectationEstimate mc_expectation(const Word& w, std::uint32_t n, std::uint64_t trials,
                                   std::uint64_t seed, int workers = 1);

// Upper bounds on E[F_w(N)] for N > |w|^2:
//   first:  1 + (|Crit| + t^(2+2pi)/(N-t^2)) / N^(pi-1)
//   second: 1 + |Crit|/N^(pi-1) * (1 + t^(2+2pi)/(N-t^2))
enum class BoundForm { first, second };

double expectation_upper_bound(std::size_t length, int pi, std::size_t crit_size, std::uint32_t n,
                        BoundForm form = BoundForm::second);
// Rejects pi = 0 and pi = infinity.
double expectation_upper_bound(const WordClassification& c, std::uint32_t n,
                        BoundForm form = BoundForm::second);

}  // namespace nbtrace
