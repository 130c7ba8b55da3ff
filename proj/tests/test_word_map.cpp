#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "generators.hpp"
#include "nbtrace/primitivity.hpp"
#include "nbtrace/word_map.hpp"

using namespace nbtrace;

namespace {

// Sum of fixed points over all tuples in S_n^k, by nested next_permutation
// and direct left-to-right composition: i -> sigma_{l1} -> sigma_{l2} ...
std::pair<std::uint64_t, std::uint64_t> brute_sum(const Word& w, int n, int k) {
  std::vector<int> base(static_cast<std::size_t>(n));
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<int>> all;
  do {
    all.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  std::uint64_t total = 0, tuples = 0;
  while (true) {
    for (int i = 0; i < n; ++i) {
      int x = i;
      for (Letter l : w.letters()) {
        const auto& p = all[idx[static_cast<std::size_t>(l.generator() - 1)]];
        if (l.inverted()) {
          x = static_cast<int>(std::find(p.begin(), p.end(), x) - p.begin());
        } else {
          x = p[static_cast<std::size_t>(x)];
        }
      }
      total += x == i ? 1 : 0;
    }
    ++tuples;
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == all.size()) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  return {total, tuples};
}

}  // namespace

TEST_CASE("evaluate composes left to right") {
  PermutationTuple t(3, {{1, 2, 0}, {1, 0, 2}});
  CHECK(evaluate(parse_word("a", 2), t) == Permutation{1, 2, 0});
  CHECK(evaluate(parse_word("aA", 2), t) == Permutation{0, 1, 2});
  // ab: first sigma_a then sigma_b.
  CHECK(evaluate(parse_word("ab", 2), t) == Permutation{0, 2, 1});
  CHECK(evaluate(parse_word("ba", 2), t) == Permutation{2, 1, 0});
  CHECK(evaluate(parse_word("A", 2), t) == Permutation{2, 0, 1});

  PermutationTuple swap(2, {{1, 0}});
  CHECK(evaluate(parse_word("aa", 1), swap) == Permutation{0, 1});
  CHECK(fixed_points(parse_word("aa", 1), swap) == 2);
  CHECK(fixed_points(parse_word("a", 1), PermutationTuple::identity(3, 1)) == 3);
  CHECK(fixed_points(parse_word("a", 1), PermutationTuple(3, {{1, 2, 0}})) == 0);

  CHECK_THROWS_AS(evaluate(parse_word("ab", 2), swap), std::invalid_argument);
  CHECK_THROWS_AS(PermutationTuple(3, {{0, 0, 1}}), std::invalid_argument);
  CHECK(is_permutation({2, 0, 1}));
  CHECK_FALSE(is_permutation({2, 0, 2}));
}

TEST_CASE("exact expectations against character values") {
  auto a = exact_expectation(parse_word("a", 2), 4);
  CHECK(a.exact);
  CHECK(a.numerator == 1);
  CHECK(a.denominator == 1);
  CHECK(a.std_error == 0.0);

  auto sq = exact_expectation(parse_word("aa", 2), 4);
  CHECK(sq.numerator == 2);
  CHECK(sq.denominator == 1);

  // [x, y]: 1 + 1/(N-1).
  for (std::uint32_t n = 2; n <= 5; ++n) {
    auto c = exact_expectation(parse_word("abAB", 2), n);
    CHECK(c.numerator * (n - 1) == n * c.denominator);
  }
  auto c5 = exact_expectation(parse_word("abAB", 2), 5);
  CHECK(c5.numerator == 5);
  CHECK(c5.denominator == 4);
  CHECK(c5.mean == doctest::Approx(1.25));

  CHECK(exact_expectation(parse_word("aa", 1), 1).mean == 1.0);
  CHECK_THROWS_AS(exact_expectation(parse_word("ab", 2), 7), ExactBudgetExceeded);
}

TEST_CASE("exact expectations match an independent brute force") {
  for (int t = 1; t <= 3; ++t) {
    for (const Word& w : enumerate_cyclically_reduced(2, t)) {
      for (int n = 1; n <= 4; ++n) {
        auto [total, tuples] = brute_sum(w, n, 2);
        auto e = exact_expectation(w, static_cast<std::uint32_t>(n));
        const std::uint64_t g = std::gcd(total, tuples);
        CHECK(e.numerator == total / g);
        CHECK(e.denominator == tuples / g);
      }
    }
  }
}

TEST_CASE("primitive words have expectation exactly 1") {
  for (int t = 1; t <= 4; ++t) {
    for (const Word& w : enumerate_cyclically_reduced(2, t)) {
      if (!is_primitive(w, 2)) continue;
      for (std::uint32_t n = 1; n <= 5; ++n) {
        auto e = exact_expectation(w, n);
        CHECK(e.numerator == 1);
        CHECK(e.denominator == 1);
      }
    }
  }
}

TEST_CASE("property: conjugation and inversion invariance") {
  Engine rng(41);
  for (int iter = 0; iter < 300; ++iter) {
    const int k = gen::uniform_int(rng, 1, 3);
    Word w = gen::reduced_word(rng, k, 8);
    Word u = gen::reduced_word(rng, k, 5);
    PermutationTuple tup = gen::tuple(rng, static_cast<std::uint32_t>(gen::uniform_int(rng, 1, 9)), k);
    CHECK(fixed_points(u * w * u.inverse(), tup) == fixed_points(w, tup));
    CHECK(fixed_points(w.inverse(), tup) == fixed_points(w, tup));
    Permutation p = evaluate(w, tup);
    Permutation q = evaluate(w.inverse(), tup);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(q[p[i]] == i);
  }
  for (const Word& w : enumerate_cyclically_reduced(2, 3)) {
    auto e1 = exact_expectation(w, 4);
    auto e2 = exact_expectation(w.inverse(), 4);
    CHECK(e1.numerator == e2.numerator);
    CHECK(e1.denominator == e2.denominator);
  }
}

TEST_CASE("Monte Carlo estimates") {
  auto x = mc_expectation(parse_word("a", 2), 100, 10000, 7);
  CHECK_FALSE(x.exact);
  CHECK(x.trials == 10000);
  CHECK(std::fabs(x.mean - 1.0) <= 3.0 * x.std_error);

  auto sq = mc_expectation(parse_word("aa", 2), 100, 10000, 7);
  CHECK(std::fabs(sq.mean - 2.0) <= 3.0 * sq.std_error);

  auto again = mc_expectation(parse_word("aa", 2), 100, 10000, 7);
  CHECK(again.mean == sq.mean);
  CHECK(again.std_error == sq.std_error);
  auto threaded = mc_expectation(parse_word("aa", 2), 100, 10000, 7, 4);
  CHECK(threaded.mean == sq.mean);
  CHECK(threaded.std_error == sq.std_error);

  auto small = mc_expectation(parse_word("abAB", 2), 20, 4000, 3);
  auto big = mc_expectation(parse_word("abAB", 2), 20, 8000, 3);
  const double ratio = small.std_error / big.std_error;
  CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));

  CHECK_THROWS_AS(mc_expectation(parse_word("a", 2), 10, 1, 1), std::invalid_argument);
}

TEST_CASE("effective expectation bound") {
  CHECK(expectation_upper_bound(2, 1, 1, 100) == doctest::Approx(1.0 + 1.0 * (1.0 + 16.0 / 96.0)));
  CHECK(expectation_upper_bound(2, 1, 1, 100) == doctest::Approx(2.1667).epsilon(1e-4));
  CHECK(expectation_upper_bound(2, 1, 1, 100, BoundForm::first) == doctest::Approx(1.0 + 1.0 + 16.0 / 96.0));
  CHECK(expectation_upper_bound(4, 2, 1, 17) == doctest::Approx(1.0 + 1.0 / 17.0 * (1.0 + 4096.0 / 1.0)));
  CHECK_THROWS_AS(expectation_upper_bound(2, 1, 1, 4), std::domain_error);
  CHECK_THROWS_AS(expectation_upper_bound(parse_word("a", 2).length(), 0, 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(expectation_upper_bound(primitivity_rank(parse_word("ab", 2)), 10), std::invalid_argument);

  WordClassification sq = primitivity_rank(parse_word("aa", 2));
  auto e = exact_expectation(parse_word("aa", 2), 5);
  CHECK(e.mean <= expectation_upper_bound(sq, 5));
  // Both forms bound the same quantity; the second is the weaker one when |Crit| >= 1.
  CHECK(expectation_upper_bound(sq, 5, BoundForm::first) <= expectation_upper_bound(sq, 5, BoundForm::second));
}
