#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nbtrace/word_map.hpp"

namespace nbtrace {

// Oriented edge. Edge e owns darts 2e (as listed) and 2e+1 (reversed), so
// `reverse` is a fixed-point-free involution even on loops.
struct Dart {
  int source = 0;
  int target = 0;
  int reverse = 0;
  int label = 0;  // generator index for Schreier graphs, 0 otherwise
  bool inverted = false;
};

// A d-regular multigraph; loops and parallel edges allowed. Vertices are 0-based.
class RegularGraph {
 public:
  using Edge = std::pair<int, int>;

  // Throws std::invalid_argument unless every vertex has degree d (loops count 2).
  RegularGraph(int n, int d, std::vector<Edge> edges, std::string model = "custom", std::uint64_t seed = 0,
               std::vector<int> edge_labels = {});

  int n() const { return n_; }
  int d() const { return d_; }
  const std::string& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Dart>& darts() const { return darts_; }
  std::size_t dart_count() const { return darts_.size(); }
  // Darts leaving v.
  const std::vector<int>& out_darts(int v) const { return out_[static_cast<std::size_t>(v)]; }

  // Row-major n x n; a loop adds 2 to its diagonal entry.
  std::vector<int> adjacency() const;
  bool connected() const;
  bool is_simple() const;

 private:
  int n_;
  int d_;
  std::string model_;
  std::uint64_t seed_;
  std::vector<Edge> edges_;
  std::vector<Dart> darts_;
  std::vector<std::vector<int>> out_;
};

// Edge (i, sigma_j(i)) for every j (outer) and i (inner); d = 2k.
RegularGraph schreier_graph(const PermutationTuple& tuple, std::uint64_t seed = 0);
RegularGraph sample_permutation_model(int n, int k, std::uint64_t seed);

class SamplingFailed : public std::runtime_error {
 public:
  SamplingFailed(int attempts);
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

// Pairing model with rejection until the multigraph is simple.
RegularGraph sample_uniform_simple(int n, int d, std::uint64_t seed, int max_attempts = 100000);
// Same, also reporting how many pairings were drawn.
std::pair<RegularGraph, int> sample_uniform_simple_counted(int n, int d, std::uint64_t seed,
                                                           int max_attempts = 100000);

// tr(B^t): closed walks e_1..e_t with e_{i+1} leaving the endpoint of e_i and
// e_{i+1} != reverse(e_i), indices mod t. Exact; throws std::overflow_error.
std::uint64_t nb_walk_count(const RegularGraph& g, int t);

// Text format: header "n d model seed", then one "u v" line per edge, 1-based.
void write_graph(std::ostream& os, const RegularGraph& g);
RegularGraph read_graph(std::istream& is);
RegularGraph load_graph(const std::string& path);

// The Schreier labeling when the edge list has the layout of `schreier_graph`.
std::optional<PermutationTuple> schreier_tuple(const RegularGraph& g);

}  // namespace nbtrace
