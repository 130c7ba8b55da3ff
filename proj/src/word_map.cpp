#include "nbtrace/word_map.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "nbtrace/checked.hpp"
#include "nbtrace/parallel.hpp"

namespace nbtrace {

bool is_permutation(const Permutation& p) {
  std::vector<bool> hit(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

namespace {

Permutation invert(const Permutation& p) {
  Permutation inv(p.size());
  for (std::uint32_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
  return inv;
}

std::uint32_t image(std::uint32_t i, std::span<const Letter> letters,
                    const std::vector<const Permutation*>& forward,
                    const std::vector<const Permutation*>& backward) {
  for (Letter l : letters) {
    const auto g = static_cast<std::size_t>(l.generator() - 1);
    i = l.inverted() ? (*backward[g])[i] : (*forward[g])[i];
  }
  return i;
}

void check_rank(const Word& w, const PermutationTuple& tuple) {
  if (w.max_generator() > tuple.k()) {
    throw std::invalid_argument("word uses x" + std::to_string(w.max_generator()) + " but the tuple has " +
                                std::to_string(tuple.k()) + " permutations");
  }
}

}  // namespace

PermutationTuple::PermutationTuple(std::uint32_t n, std::vector<Permutation> perms)
    : n_(n), perms_(std::move(perms)) {
  if (perms_.empty()) throw std::invalid_argument("permutation tuple needs k >= 1");
  for (const auto& p : perms_) {
    if (p.size() != n_ || !is_permutation(p)) {
      throw std::invalid_argument("tuple entry is not a permutation of 0..n-1");
    }
    inverses_.push_back(invert(p));
  }
}

PermutationTuple PermutationTuple::identity(std::uint32_t n, int k) {
  Permutation id(n);
  std::iota(id.begin(), id.end(), 0u);
  return PermutationTuple(n, std::vector<Permutation>(static_cast<std::size_t>(k), id));
}

PermutationTuple PermutationTuple::random(std::uint32_t n, int k, Engine& rng) {
  std::vector<Permutation> perms;
  perms.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) perms.push_back(random_permutation(n, rng));
  return PermutationTuple(n, std::move(perms));
}

Permutation evaluate(const Word& w, const PermutationTuple& tuple) {
  check_rank(w, tuple);
  Permutation out(tuple.n());
  for (std::uint32_t i = 0; i < tuple.n(); ++i) {
    std::uint32_t v = i;
    for (Letter l : w.letters()) v = l.inverted() ? tuple.inverse(l.generator())[v] : tuple[l.generator()][v];
    out[i] = v;
  }
  return out;
}

std::uint32_t fixed_points(const Word& w, const PermutationTuple& tuple) {
  check_rank(w, tuple);
  std::uint32_t count = 0;
  for (std::uint32_t i = 0; i < tuple.n(); ++i) {
    std::uint32_t v = i;
    for (Letter l : w.letters()) v = l.inverted() ? tuple.inverse(l.generator())[v] : tuple[l.generator()][v];
    if (v == i) ++count;
  }
  return count;
}

ExpectationEstimate exact_expectation(const Word& w, std::uint32_t n, std::uint64_t budget) {
  if (n < 1) throw std::invalid_argument("exact_expectation needs n >= 1");
  std::set<int> used_set;
  for (Letter l : w.letters()) used_set.insert(l.generator());
  const std::vector<int> used(used_set.begin(), used_set.end());

  std::uint64_t factorial = 1;
  for (std::uint32_t i = 2; i <= n; ++i) {
    factorial *= i;
    if (factorial > budget) break;
  }
  std::uint64_t tuples = 1;
  for (std::size_t j = 0; j < used.size(); ++j) {
    if (tuples > budget / factorial) {
      throw ExactBudgetExceeded("exhaustive sweep over (" + std::to_string(n) + "!)^" +
                                std::to_string(used.size()) + " tuples exceeds budget " +
                                std::to_string(budget));
    }
    tuples *= factorial;
  }
  if (tuples > budget) {
    throw ExactBudgetExceeded("exhaustive sweep exceeds budget " + std::to_string(budget));
  }

  std::vector<Permutation> all;
  std::vector<Permutation> all_inverse;
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0u);
  do {
    all.push_back(p);
    all_inverse.push_back(invert(p));
  } while (std::next_permutation(p.begin(), p.end()));

  const int k = std::max(w.rank(), w.max_generator());
  std::vector<const Permutation*> forward(static_cast<std::size_t>(k), &all[0]);
  std::vector<const Permutation*> backward(static_cast<std::size_t>(k), &all_inverse[0]);
  std::vector<std::size_t> odometer(used.size(), 0);

  std::uint64_t total = 0;
  for (std::uint64_t visited = 0; visited < tuples; ++visited) {
    for (std::size_t j = 0; j < used.size(); ++j) {
      const auto g = static_cast<std::size_t>(used[j] - 1);
      forward[g] = &all[odometer[j]];
      backward[g] = &all_inverse[odometer[j]];
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      if (image(i, w.letters(), forward, backward) == i) ++total;
    }
    for (std::size_t j = 0; j < odometer.size(); ++j) {
      if (++odometer[j] < all.size()) break;
      odometer[j] = 0;
    }
  }

  ExpectationEstimate e;
  e.exact = true;
  e.trials = tuples;
  const std::uint64_t g = std::gcd(total, tuples);
  e.numerator = total / g;
  e.denominator = tuples / g;
  e.mean = static_cast<double>(e.numerator) / static_cast<double>(e.denominator);
  return e;
}

ExpectationEstimate mc_expectation(const Word& w, std::uint32_t n, std::uint64_t trials,
                                   std::uint64_t seed, int workers) {
  if (trials < 2) throw std::invalid_argument("mc_expectation needs at least 2 trials");
  if (n < 1) throw std::invalid_argument("mc_expectation needs n >= 1");
  const int k = std::max(1, w.max_generator());
  std::vector<std::uint32_t> counts(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    Engine rng(derive_seed(seed, "wordmap", i));
    counts[i] = fixed_points(w, PermutationTuple::random(n, k, rng));
  });
  // Integer sums keep the aggregate independent of evaluation order.
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  for (auto c : counts) {
    sum += c;
    sum_sq += static_cast<std::uint64_t>(c) * c;
  }
  const auto t = static_cast<double>(trials);
  const double mean = static_cast<double>(sum) / t;
  const double var = std::max(0.0, (static_cast<double>(sum_sq) - t * mean * mean) / (t - 1.0));
  ExpectationEstimate e;
  e.mean = mean;
  e.std_error = std::sqrt(var / t);
  e.trials = trials;
  return e;
}

double expectation_upper_bound(std::size_t length, int pi, std::size_t crit_size, std::uint32_t n,
                        BoundForm form) {
  if (pi < 1) throw std::invalid_argument("bound needs a finite primitivity rank >= 1");
  const auto t = static_cast<double>(length);
  const auto big_n = static_cast<double>(n);
  if (big_n <= t * t) {
    throw std::domain_error("bound needs N > t^2 (N = " + std::to_string(n) + ", t = " +
                            std::to_string(length) + ")");
  }
  const double tail = std::pow(t, 2.0 + 2.0 * pi) / (big_n - t * t);
  const double scale = std::pow(big_n, static_cast<double>(pi - 1));
  const auto crit = static_cast<double>(crit_size);
  if (form == BoundForm::first) return 1.0 + (crit + tail) / scale;
  return 1.0 + crit / scale * (1.0 + tail);
}

double expectation_upper_bound(const WordClassification& c, std::uint32_t n, BoundForm form) {
  if (!c.pi.finite()) throw std::invalid_argument("bound is undefined for primitive words");
  return expectation_upper_bound(c.word.length(), c.pi.value, c.crit_size(), n, form);
}

}  // namespace nbtrace
