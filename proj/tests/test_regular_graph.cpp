#include <doctest.h>

#include <set>
#include <sstream>

#include "generators.hpp"
#include "nbtrace/regular_graph.hpp"
#include "nbtrace/word_map.hpp"

using namespace nbtrace;

namespace {

// tr(B^t) by brute force over all dart sequences (tiny graphs only).
std::uint64_t brute_nb_walks(const RegularGraph& g, int t) {
  const auto& darts = g.darts();
  const int m = static_cast<int>(darts.size());
  std::vector<int> seq(static_cast<std::size_t>(t), 0);
  std::uint64_t count = 0;
  while (true) {
    bool ok = true;
    for (int i = 0; i < t && ok; ++i) {
      const Dart& e = darts[static_cast<std::size_t>(seq[i])];
      const int j = seq[static_cast<std::size_t>((i + 1) % t)];
      ok = darts[static_cast<std::size_t>(j)].source == e.target && j != e.reverse;
    }
    count += ok ? 1 : 0;
    int pos = t - 1;
    while (pos >= 0 && seq[pos] == m - 1) seq[pos--] = 0;
    if (pos < 0) break;
    ++seq[pos];
  }
  return count;
}

RegularGraph triangle() { return RegularGraph(3, 2, {{0, 1}, {1, 2}, {2, 0}}); }

}  // namespace

TEST_CASE("Schreier graphs") {
  RegularGraph loops = schreier_graph(PermutationTuple::identity(1, 2));
  CHECK(loops.n() == 1);
  CHECK(loops.d() == 4);
  CHECK(loops.adjacency() == std::vector<int>{4});
  CHECK(loops.dart_count() == 4);

  RegularGraph tri = schreier_graph(PermutationTuple(3, {{1, 2, 0}}));
  CHECK(tri.d() == 2);
  CHECK(tri.adjacency() == std::vector<int>{0, 1, 1, 1, 0, 1, 1, 1, 0});
  CHECK(tri.is_simple());

  RegularGraph dbl = schreier_graph(PermutationTuple(2, {{1, 0}}));
  CHECK(dbl.adjacency() == std::vector<int>{0, 2, 2, 0});
  CHECK_FALSE(dbl.is_simple());
  CHECK(dbl.connected());
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(RegularGraph(3, 2, {{0, 1}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(RegularGraph(2, 1, {{0, 5}}), std::invalid_argument);
  CHECK_NOTHROW(RegularGraph(1, 2, {{0, 0}}));
}

TEST_CASE("property: Schreier graph structure") {
  Engine rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    const auto n = static_cast<std::uint32_t>(gen::uniform_int(rng, 1, 12));
    const int k = gen::uniform_int(rng, 1, 3);
    PermutationTuple tup = gen::tuple(rng, n, k);
    RegularGraph g = schreier_graph(tup);
    CHECK(g.d() == 2 * k);
    CHECK(g.dart_count() == static_cast<std::size_t>(n) * static_cast<std::size_t>(2 * k));

    // Adjacency = sum_j (P_j + P_j^T).
    std::vector<int> expected(static_cast<std::size_t>(n) * n, 0);
    for (int j = 1; j <= k; ++j) {
      for (std::uint32_t i = 0; i < n; ++i) {
        ++expected[i * n + tup[j][i]];
        ++expected[tup[j][i] * n + i];
      }
    }
    CHECK(g.adjacency() == expected);
    for (std::uint32_t i = 0; i < n; ++i) {
      int row = 0;
      for (std::uint32_t j = 0; j < n; ++j) row += expected[i * n + j];
      CHECK(row == 2 * k);
    }

    const auto& darts = g.darts();
    for (std::size_t e = 0; e < darts.size(); ++e) {
      const Dart& x = darts[e];
      CHECK(static_cast<std::size_t>(x.reverse) != e);
      CHECK(static_cast<std::size_t>(darts[static_cast<std::size_t>(x.reverse)].reverse) == e);
      CHECK(darts[static_cast<std::size_t>(x.reverse)].source == x.target);
      CHECK(darts[static_cast<std::size_t>(x.reverse)].label == x.label);
      const auto& p = tup[x.label];
      if (x.inverted) {
        CHECK(p[static_cast<std::size_t>(x.target)] == static_cast<std::uint32_t>(x.source));
      } else {
        CHECK(p[static_cast<std::size_t>(x.source)] == static_cast<std::uint32_t>(x.target));
      }
    }
    for (int v = 0; v < g.n(); ++v) CHECK(g.out_darts(v).size() == static_cast<std::size_t>(2 * k));

    auto back = schreier_tuple(g);
    REQUIRE(back.has_value());
    for (int j = 1; j <= k; ++j) CHECK((*back)[j] == tup[j]);
  }
}

TEST_CASE("sampling is deterministic per seed") {
  RegularGraph a = sample_permutation_model(50, 2, 99);
  RegularGraph b = sample_permutation_model(50, 2, 99);
  RegularGraph c = sample_permutation_model(50, 2, 100);
  CHECK(a.edges() == b.edges());
  CHECK(a.edges() != c.edges());
  CHECK(a.model() == "permutation");
  CHECK(sample_uniform_simple(30, 3, 5).edges() == sample_uniform_simple(30, 3, 5).edges());
}

TEST_CASE("uniform simple sampling") {
  RegularGraph k4 = sample_uniform_simple(4, 3, 1);
  CHECK(k4.adjacency() == std::vector<int>{0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0});
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RegularGraph g = sample_uniform_simple(4, 3, seed);
    CHECK(g.adjacency() == k4.adjacency());
  }
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 6 + static_cast<int>(seed % 20);
    const int d = 3 + static_cast<int>(seed % 3);
    if (n * d % 2 != 0) continue;
    RegularGraph g = sample_uniform_simple(n, d, seed);
    CHECK(g.is_simple());
    auto adj = g.adjacency();
    for (int i = 0; i < n; ++i) {
      int row = 0;
      CHECK(adj[static_cast<std::size_t>(i * n + i)] == 0);
      for (int j = 0; j < n; ++j) {
        CHECK(adj[static_cast<std::size_t>(i * n + j)] <= 1);
        row += adj[static_cast<std::size_t>(i * n + j)];
      }
      CHECK(row == d);
    }
  }
  CHECK_THROWS_AS(sample_uniform_simple(5, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_uniform_simple(4, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_uniform_simple(40, 12, 1, 2), SamplingFailed);
}

TEST_CASE("non-backtracking walk counts by hand") {
  RegularGraph tri = triangle();
  CHECK(nb_walk_count(tri, 1) == 0);
  CHECK(nb_walk_count(tri, 2) == 0);
  CHECK(nb_walk_count(tri, 3) == 6);
  CHECK(nb_walk_count(tri, 6) == 6);

  RegularGraph loop = schreier_graph(PermutationTuple::identity(1, 1));
  CHECK(nb_walk_count(loop, 1) == 2);
  RegularGraph bouquet2 = schreier_graph(PermutationTuple::identity(1, 2));
  CHECK(nb_walk_count(bouquet2, 1) == 4);
  CHECK(nb_walk_count(bouquet2, 2) == 12);
  CHECK_THROWS_AS(nb_walk_count(tri, 0), std::invalid_argument);
}

TEST_CASE("property: walk counts match brute force over dart sequences") {
  Engine rng(13);
  for (int iter = 0; iter < 40; ++iter) {
    const auto n = static_cast<std::uint32_t>(gen::uniform_int(rng, 1, 4));
    const int k = gen::uniform_int(rng, 1, 2);
    RegularGraph g = schreier_graph(gen::tuple(rng, n, k));
    for (int t = 1; t <= 4; ++t) CHECK(nb_walk_count(g, t) == brute_nb_walks(g, t));
  }
}

TEST_CASE("walk counts equal fixed-point sums over cyclically reduced words") {
  Engine rng(19);
  for (int iter = 0; iter < 30; ++iter) {
    const auto n = static_cast<std::uint32_t>(gen::uniform_int(rng, 1, 8));
    PermutationTuple tup = gen::tuple(rng, n, 2);
    RegularGraph g = schreier_graph(tup);
    for (int t = 1; t <= 5; ++t) {
      std::uint64_t sum = 0;
      for (const Word& w : enumerate_cyclically_reduced(2, t)) sum += fixed_points(w, tup);
      CHECK(nb_walk_count(g, t) == sum);
    }
  }
}

TEST_CASE("walk count overflow is detected") {
  RegularGraph big = schreier_graph(PermutationTuple::identity(1, 13));
  CHECK_THROWS_AS(nb_walk_count(big, 40), std::overflow_error);
}

TEST_CASE("graph text format round-trips") {
  RegularGraph g = sample_permutation_model(9, 2, 4);
  std::stringstream ss;
  write_graph(ss, g);
  const std::string text = ss.str();
  CHECK(text.rfind("9 4 permutation 4\n", 0) == 0);
  RegularGraph back = read_graph(ss);
  CHECK(back.edges() == g.edges());
  CHECK(back.model() == "permutation");
  CHECK(back.seed() == 4);
  for (int t = 1; t <= 5; ++t) CHECK(nb_walk_count(back, t) == nb_walk_count(g, t));

  std::stringstream loop("1 2 custom 0\n1 1\n");
  RegularGraph l = read_graph(loop);
  CHECK(l.adjacency() == std::vector<int>{2});

  std::stringstream bad("2 1 custom 0\n1 3\n");
  CHECK_THROWS(read_graph(bad));
}

TEST_CASE("connectivity") {
  CHECK(triangle().connected());
  RegularGraph two(6, 2, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
  CHECK_FALSE(two.connected());
}
