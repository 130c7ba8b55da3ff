#include "nbtrace/regular_graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "nbtrace/checked.hpp"

namespace nbtrace {

RegularGraph::RegularGraph(int n, int d, std::vector<Edge> edges, std::string model, std::uint64_t seed,
                           std::vector<int> edge_labels)
    : n_(n), d_(d), model_(std::move(model)), seed_(seed), edges_(std::move(edges)) {
  if (n_ < 1 || d_ < 0) throw std::invalid_argument("graph needs n >= 1 and d >= 0");
  if (!edge_labels.empty() && edge_labels.size() != edges_.size()) {
    throw std::invalid_argument("one label per edge expected");
  }
  std::vector<int> degree(static_cast<std::size_t>(n_), 0);
  out_.resize(static_cast<std::size_t>(n_));
  darts_.reserve(2 * edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto [u, v] = edges_[e];
    if (u < 0 || u >= n_ || v < 0 || v >= n_) throw std::invalid_argument("edge endpoint out of range");
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
    const int label = edge_labels.empty() ? 0 : edge_labels[e];
    const int fwd = static_cast<int>(2 * e);
    darts_.push_back({u, v, fwd + 1, label, false});
    darts_.push_back({v, u, fwd, label, true});
    out_[static_cast<std::size_t>(u)].push_back(fwd);
    out_[static_cast<std::size_t>(v)].push_back(fwd + 1);
  }
  for (int v = 0; v < n_; ++v) {
    if (degree[static_cast<std::size_t>(v)] != d_) {
      throw std::invalid_argument("vertex " + std::to_string(v + 1) + " has degree " +
                                  std::to_string(degree[static_cast<std::size_t>(v)]) + ", expected " +
                                  std::to_string(d_));
    }
  }
}

std::vector<int> RegularGraph::adjacency() const {
  const auto n = static_cast<std::size_t>(n_);
  std::vector<int> a(n * n, 0);
  for (auto [u, v] : edges_) {
    a[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)] += 1;
    a[static_cast<std::size_t>(v) * n + static_cast<std::size_t>(u)] += 1;
  }
  return a;
}

bool RegularGraph::connected() const {
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  std::deque<int> queue{0};
  seen[0] = true;
  int count = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : out_darts(v)) {
      int w = darts_[static_cast<std::size_t>(e)].target;
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++count;
        queue.push_back(w);
      }
    }
  }
  return count == n_;
}

bool RegularGraph::is_simple() const {
  std::unordered_set<std::uint64_t> seen;
  for (auto [u, v] : edges_) {
    if (u == v) return false;
    auto key = (static_cast<std::uint64_t>(std::min(u, v)) << 32) | static_cast<std::uint32_t>(std::max(u, v));
    if (!seen.insert(key).second) return false;
  }
  return true;
}

RegularGraph schreier_graph(const PermutationTuple& tuple, std::uint64_t seed) {
  std::vector<RegularGraph::Edge> edges;
  std::vector<int> labels;
  const auto n = static_cast<int>(tuple.n());
  for (int j = 1; j <= tuple.k(); ++j) {
    for (int i = 0; i < n; ++i) {
      edges.emplace_back(i, static_cast<int>(tuple[j][static_cast<std::size_t>(i)]));
      labels.push_back(j);
    }
  }
  return RegularGraph(n, 2 * tuple.k(), std::move(edges), "permutation", seed, std::move(labels));
}

RegularGraph sample_permutation_model(int n, int k, std::uint64_t seed) {
  if (n < 1 || k < 1) throw std::invalid_argument("permutation model needs n >= 1 and k >= 1");
  Engine rng(seed);
  return schreier_graph(PermutationTuple::random(static_cast<std::uint32_t>(n), k, rng), seed);
}

SamplingFailed::SamplingFailed(int attempts)
    : std::runtime_error("no simple graph after " + std::to_string(attempts) + " pairings"),
      attempts_(attempts) {}

std::pair<RegularGraph, int> sample_uniform_simple_counted(int n, int d, std::uint64_t seed, int max_attempts) {
  if (d < 1 || n <= d) throw std::invalid_argument("uniform simple model needs 1 <= d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0) throw std::invalid_argument("n*d must be even");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be positive");
  Engine rng(seed);
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (int v = 0; v < n; ++v) stubs.insert(stubs.end(), static_cast<std::size_t>(d), v);

  std::unordered_set<std::uint64_t> seen;
  std::vector<RegularGraph::Edge> edges;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    seen.clear();
    edges.clear();
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = std::min(stubs[i], stubs[i + 1]);
      int v = std::max(stubs[i], stubs[i + 1]);
      auto key = (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
      if (u == v || !seen.insert(key).second) {
        simple = false;
        break;
      }
      edges.emplace_back(u, v);
    }
    if (!simple) continue;
    std::sort(edges.begin(), edges.end());
    return {RegularGraph(n, d, edges, "uniform-simple", seed), attempt};
  }
  throw SamplingFailed(max_attempts);
}

RegularGraph sample_uniform_simple(int n, int d, std::uint64_t seed, int max_attempts) {
  return sample_uniform_simple_counted(n, d, seed, max_attempts).first;
}

std::uint64_t nb_walk_count(const RegularGraph& g, int t) {
  if (t < 1) throw std::invalid_argument("nb_walk_count needs t >= 1");
  const auto& darts = g.darts();
  const std::size_t m = darts.size();
  std::vector<std::uint64_t> value(m, 0);
  std::vector<std::uint64_t> next_value(m, 0);
  std::vector<int> frontier;
  std::vector<int> next;
  std::uint64_t total = 0;
  for (std::size_t start = 0; start < m; ++start) {
    frontier.assign(1, static_cast<int>(start));
    value[start] = 1;
    for (int step = 0; step < t; ++step) {
      next.clear();
      for (int e : frontier) {
        const Dart& de = darts[static_cast<std::size_t>(e)];
        const std::uint64_t c = value[static_cast<std::size_t>(e)];
        value[static_cast<std::size_t>(e)] = 0;
        for (int f : g.out_darts(de.target)) {
          if (f == de.reverse) continue;
          auto& slot = next_value[static_cast<std::size_t>(f)];
          if (slot == 0) next.push_back(f);
          slot = checked_add(slot, c, "nb_walk_count");
        }
      }
      for (int f : next) {
        value[static_cast<std::size_t>(f)] = next_value[static_cast<std::size_t>(f)];
        next_value[static_cast<std::size_t>(f)] = 0;
      }
      frontier.swap(next);
    }
    total = checked_add(total, value[start], "nb_walk_count");
    for (int e : frontier) value[static_cast<std::size_t>(e)] = 0;
  }
  return total;
}

void write_graph(std::ostream& os, const RegularGraph& g) {
  os << g.n() << ' ' << g.d() << ' ' << g.model() << ' ' << g.seed() << '\n';
  for (auto [u, v] : g.edges()) os << (u + 1) << ' ' << (v + 1) << '\n';
}

std::optional<PermutationTuple> schreier_tuple(const RegularGraph& g) {
  const int n = g.n();
  if (g.d() % 2 != 0 || g.d() == 0) return std::nullopt;
  const int k = g.d() / 2;
  const auto& edges = g.edges();
  if (edges.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(k)) return std::nullopt;
  std::vector<Permutation> perms;
  for (int j = 0; j < k; ++j) {
    Permutation p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto [u, v] = edges[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
      if (u != i) return std::nullopt;
      p[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(v);
    }
    if (!is_permutation(p)) return std::nullopt;
    perms.push_back(std::move(p));
  }
  return PermutationTuple(static_cast<std::uint32_t>(n), std::move(perms));
}

RegularGraph read_graph(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::invalid_argument("graph file: missing header");
  std::istringstream hs(header);
  int n = 0;
  int d = 0;
  std::string model;
  std::uint64_t seed = 0;
  if (!(hs >> n >> d >> model >> seed)) throw std::invalid_argument("graph file: bad header '" + header + "'");
  std::vector<RegularGraph::Edge> edges;
  int u = 0;
  int v = 0;
  while (is >> u >> v) {
    if (u < 1 || v < 1 || u > n || v > n) throw std::invalid_argument("graph file: vertex out of range");
    edges.emplace_back(u - 1, v - 1);
  }
  if (!is.eof()) throw std::invalid_argument("graph file: malformed edge line");
  RegularGraph g(n, d, std::move(edges), model, seed);
  if (model == "permutation") {
    if (auto tuple = schreier_tuple(g)) return schreier_graph(*tuple, seed);
  }
  return g;
}

RegularGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  return read_graph(in);
}

}  // namespace nbtrace
