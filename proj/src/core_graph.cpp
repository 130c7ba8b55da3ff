#include "nbtrace/core_graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

namespace nbtrace {

QuotientCapExceeded::QuotientCapExceeded(int vertices, int cap)
    : std::runtime_error("core graph has " + std::to_string(vertices) +
                         " vertices, above the quotient cap of " + std::to_string(cap)),
      vertices_(vertices),
      cap_(cap) {}

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
  }

 private:
  std::vector<int> parent_;
};

void validate(const PreGraph& g) {
  if (g.rank < 1) throw std::invalid_argument("pre-graph rank must be positive");
  if (g.vertex_count < 1) throw std::invalid_argument("pre-graph needs a vertex");
  if (g.basepoint < 0 || g.basepoint >= g.vertex_count) {
    throw std::invalid_argument("basepoint out of range");
  }
  for (const auto& d : g.darts) {
    if (d.from < 0 || d.from >= g.vertex_count || d.to < 0 || d.to >= g.vertex_count) {
      throw std::invalid_argument("dart endpoint out of range");
    }
    if (d.label < 1 || d.label > g.rank) throw std::invalid_argument("dart label out of range");
  }
}

// Merge vertices joined by equally labeled darts in the same direction until
// no such pair remains.
std::vector<LabeledDart> fold_edges(const PreGraph& g, UnionFind& uf) {
  const auto k = static_cast<std::size_t>(g.rank);
  std::vector<int> out(static_cast<std::size_t>(g.vertex_count) * k);
  std::vector<int> in(out.size());
  bool changed = true;
  while (changed) {
    changed = false;
    std::fill(out.begin(), out.end(), -1);
    std::fill(in.begin(), in.end(), -1);
    for (const auto& d : g.darts) {
      int u = uf.find(d.from);
      int v = uf.find(d.to);
      auto l = static_cast<std::size_t>(d.label - 1);
      auto& o = out[static_cast<std::size_t>(u) * k + l];
      if (o < 0) {
        o = v;
      } else if (uf.find(o) != v) {
        uf.unite(o, v);
        changed = true;
        v = uf.find(v);
        o = v;
      }
      u = uf.find(u);
      auto& i = in[static_cast<std::size_t>(v) * k + l];
      if (i < 0) {
        i = u;
      } else if (uf.find(i) != u) {
        uf.unite(i, u);
        changed = true;
        i = uf.find(u);
      }
    }
  }
  std::set<LabeledDart> distinct;
  for (const auto& d : g.darts) distinct.insert({uf.find(d.from), uf.find(d.to), d.label});
  return {distinct.begin(), distinct.end()};
}

}  // namespace

int CoreGraph::step(int v, Letter l) const {
  if (l.generator() > rank_) return kNone;
  if (!l.inverted()) {
    int d = out_dart(v, l.generator());
    return d == kNone ? kNone : darts_[static_cast<std::size_t>(d)].to;
  }
  int d = in_dart(v, l.generator());
  return d == kNone ? kNone : darts_[static_cast<std::size_t>(d)].from;
}

CoreGraph fold(const PreGraph& g) {
  validate(g);
  UnionFind uf(g.vertex_count);
  std::vector<LabeledDart> edges = fold_edges(g, uf);
  const int n = g.vertex_count;
  const int base = uf.find(g.basepoint);
  const auto k = static_cast<std::size_t>(g.rank);

  std::vector<std::vector<int>> incident(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    incident[static_cast<std::size_t>(edges[e].from)].push_back(static_cast<int>(e));
    if (edges[e].to != edges[e].from) {
      incident[static_cast<std::size_t>(edges[e].to)].push_back(static_cast<int>(e));
    }
  }

  // Keep the basepoint component.
  std::vector<bool> reached(static_cast<std::size_t>(n), false);
  std::vector<bool> alive(edges.size(), false);
  std::deque<int> queue{base};
  reached[static_cast<std::size_t>(base)] = true;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : incident[static_cast<std::size_t>(v)]) {
      alive[static_cast<std::size_t>(e)] = true;
      const auto& d = edges[static_cast<std::size_t>(e)];
      for (int w : {d.from, d.to}) {
        if (!reached[static_cast<std::size_t>(w)]) {
          reached[static_cast<std::size_t>(w)] = true;
          queue.push_back(w);
        }
      }
    }
  }

  // Trim non-basepoint vertices of degree <= 1. A loop counts twice.
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!alive[e]) continue;
    ++degree[static_cast<std::size_t>(edges[e].from)];
    ++degree[static_cast<std::size_t>(edges[e].to)];
  }
  for (int v = 0; v < n; ++v) {
    if (v != base && reached[static_cast<std::size_t>(v)] && degree[static_cast<std::size_t>(v)] <= 1) {
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (!reached[static_cast<std::size_t>(v)]) continue;
    reached[static_cast<std::size_t>(v)] = false;
    for (int e : incident[static_cast<std::size_t>(v)]) {
      if (!alive[static_cast<std::size_t>(e)]) continue;
      alive[static_cast<std::size_t>(e)] = false;
      const auto& d = edges[static_cast<std::size_t>(e)];
      int other = d.from == v ? d.to : d.from;
      --degree[static_cast<std::size_t>(other)];
      if (other != base && reached[static_cast<std::size_t>(other)] &&
          degree[static_cast<std::size_t>(other)] <= 1) {
        queue.push_back(other);
      }
    }
  }

  // Breadth-first renumbering in (label, outgoing before incoming) order.
  std::vector<int> out(static_cast<std::size_t>(n) * k, -1);
  std::vector<int> in(out.size(), -1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!alive[e]) continue;
    const auto& d = edges[e];
    auto l = static_cast<std::size_t>(d.label - 1);
    out[static_cast<std::size_t>(d.from) * k + l] = d.to;
    in[static_cast<std::size_t>(d.to) * k + l] = d.from;
  }
  std::vector<int> renumber(static_cast<std::size_t>(n), -1);
  int next_id = 0;
  renumber[static_cast<std::size_t>(base)] = next_id++;
  queue.assign(1, base);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (std::size_t l = 0; l < k; ++l) {
      for (int w : {out[static_cast<std::size_t>(v) * k + l], in[static_cast<std::size_t>(v) * k + l]}) {
        if (w >= 0 && renumber[static_cast<std::size_t>(w)] < 0) {
          renumber[static_cast<std::size_t>(w)] = next_id++;
          queue.push_back(w);
        }
      }
    }
  }

  CoreGraph result;
  result.rank_ = g.rank;
  result.vertex_count_ = next_id;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!alive[e]) continue;
    const auto& d = edges[e];
    result.darts_.push_back({renumber[static_cast<std::size_t>(d.from)],
                             renumber[static_cast<std::size_t>(d.to)], d.label});
  }
  std::sort(result.darts_.begin(), result.darts_.end(), [](const LabeledDart& a, const LabeledDart& b) {
    return std::tie(a.from, a.label, a.to) < std::tie(b.from, b.label, b.to);
  });
  result.out_.assign(static_cast<std::size_t>(next_id) * k, CoreGraph::kNone);
  result.in_.assign(result.out_.size(), CoreGraph::kNone);
  for (std::size_t e = 0; e < result.darts_.size(); ++e) {
    const auto& d = result.darts_[e];
    result.out_[result.slot(d.from, d.label)] = static_cast<int>(e);
    result.in_[result.slot(d.to, d.label)] = static_cast<int>(e);
  }
  return result;
}

CoreGraph core_of_word(const Word& w) {
  PreGraph g;
  g.rank = w.rank();
  const auto t = static_cast<int>(w.length());
  g.vertex_count = std::max(1, t);
  for (int i = 0; i < t; ++i) {
    Letter l = w[static_cast<std::size_t>(i)];
    int a = i;
    int b = (i + 1) % t;
    if (l.inverted()) std::swap(a, b);
    g.darts.push_back({a, b, l.generator()});
  }
  return fold(g);
}

CoreGraph bouquet(int rank) {
  PreGraph g;
  g.rank = rank;
  for (int l = 1; l <= rank; ++l) g.darts.push_back({0, 0, l});
  return fold(g);
}

bool contains(const CoreGraph& g, const Word& w) {
  int v = 0;
  for (Letter l : w.letters()) {
    v = g.step(v, l);
    if (v == CoreGraph::kNone) return false;
  }
  return v == 0;
}

// The stored numbering is already canonical (see `fold`), so serializing the
// sorted dart list is enough.
std::string canonical_form(const CoreGraph& g) {
  std::ostringstream os;
  os << "k" << g.rank() << ":v" << g.vertex_count() << ":";
  bool first = true;
  for (const auto& d : g.darts()) {
    if (!first) os << ',';
    first = false;
    os << d.from << '-' << d.label << '>' << d.to;
  }
  return os.str();
}

SubgroupBasis basis_of(const CoreGraph& g, std::optional<std::uint64_t> tie_break_seed) {
  const int n = g.vertex_count();
  const int k = g.rank();
  SubgroupBasis result;
  result.tree_paths.assign(static_cast<std::size_t>(n), Word(k));
  result.dart_to_generator.assign(static_cast<std::size_t>(g.dart_count()), -1);

  // Exploration choices: (label, inverted) in a fixed or shuffled order.
  std::vector<Letter> order;
  for (int l = 1; l <= k; ++l) {
    order.emplace_back(l, false);
    order.emplace_back(l, true);
  }
  std::optional<std::mt19937_64> rng;
  if (tie_break_seed) rng.emplace(*tie_break_seed);

  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<bool> tree_dart(static_cast<std::size_t>(g.dart_count()), false);
  std::deque<int> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (rng) std::shuffle(order.begin(), order.end(), *rng);
    for (Letter l : order) {
      int d = l.inverted() ? g.in_dart(v, l.generator()) : g.out_dart(v, l.generator());
      if (d == CoreGraph::kNone) continue;
      const auto& dart = g.darts()[static_cast<std::size_t>(d)];
      int w = l.inverted() ? dart.from : dart.to;
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      tree_dart[static_cast<std::size_t>(d)] = true;
      std::vector<Letter> one{l};
      result.tree_paths[static_cast<std::size_t>(w)] =
          result.tree_paths[static_cast<std::size_t>(v)] * Word::from_letters(one, k);
      queue.push_back(w);
    }
  }

  for (std::size_t d = 0; d < g.darts().size(); ++d) {
    if (tree_dart[d]) continue;
    const auto& dart = g.darts()[d];
    std::vector<Letter> one{Letter(dart.label, false)};
    result.dart_to_generator[d] = static_cast<int>(result.basis.size());
    result.basis.push_back(result.tree_paths[static_cast<std::size_t>(dart.from)] *
                           Word::from_letters(one, k) *
                           result.tree_paths[static_cast<std::size_t>(dart.to)].inverse());
  }
  return result;
}

Word rewrite_in_basis(const CoreGraph& g, const SubgroupBasis& basis, const Word& w) {
  const int r = std::max(1, static_cast<int>(basis.basis.size()));
  std::vector<Letter> out;
  int v = 0;
  for (Letter l : w.letters()) {
    int d = CoreGraph::kNone;
    if (l.generator() <= g.rank()) {
      d = l.inverted() ? g.in_dart(v, l.generator()) : g.out_dart(v, l.generator());
    }
    if (d == CoreGraph::kNone) {
      throw std::invalid_argument("word " + to_string(w) + " does not trace in the core graph");
    }
    const auto& dart = g.darts()[static_cast<std::size_t>(d)];
    int y = basis.dart_to_generator[static_cast<std::size_t>(d)];
    if (y >= 0) out.emplace_back(y + 1, l.inverted());
    v = l.inverted() ? dart.from : dart.to;
  }
  if (v != 0) {
    throw std::invalid_argument("word " + to_string(w) + " is not in the subgroup");
  }
  return Word::from_letters(out, r);
}

Word expand_in_basis(const SubgroupBasis& basis, const Word& y_word, int rank) {
  Word out(rank);
  for (Letter y : y_word.letters()) {
    const Word& b = basis.basis.at(static_cast<std::size_t>(y.generator() - 1));
    out = out * (y.inverted() ? b.inverse() : b);
  }
  return out;
}

namespace {

CoreGraph quotient_by(const CoreGraph& g, const std::vector<int>& block, int block_count) {
  PreGraph pre;
  pre.rank = g.rank();
  pre.vertex_count = block_count;
  pre.basepoint = block[0];
  pre.darts.reserve(g.darts().size());
  for (const auto& d : g.darts()) {
    pre.darts.push_back({block[static_cast<std::size_t>(d.from)],
                         block[static_cast<std::size_t>(d.to)], d.label});
  }
  return fold(pre);
}

}  // namespace

void for_each_quotient(const CoreGraph& g, int vertex_cap,
                       const std::function<void(const CoreGraph&)>& visit) {
  const int n = g.vertex_count();
  if (n > vertex_cap) throw QuotientCapExceeded(n, vertex_cap);

  // Restricted growth strings: block[0] = 0, block[i] <= max(block[0..i-1]) + 1.
  std::vector<int> block(static_cast<std::size_t>(n), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
  std::unordered_set<std::string> seen;
  while (true) {
    CoreGraph q = quotient_by(g, block, prefix_max[static_cast<std::size_t>(n - 1)] + 1);
    if (seen.insert(canonical_form(q)).second) visit(q);

    int i = n - 1;
    while (i > 0 && block[static_cast<std::size_t>(i)] > prefix_max[static_cast<std::size_t>(i - 1)]) {
      --i;
    }
    if (i == 0) break;
    ++block[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)], block[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      block[static_cast<std::size_t>(j)] = 0;
      prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(i)];
    }
  }
}

std::vector<CoreGraph> quotients(const CoreGraph& g, int vertex_cap) {
  std::vector<CoreGraph> out;
  const std::string self = canonical_form(g);
  for_each_quotient(g, vertex_cap, [&](const CoreGraph& q) {
    out.push_back(q);
    if (canonical_form(q) == self) std::rotate(out.begin(), out.end() - 1, out.end());
  });
  return out;
}

std::vector<CoreGraph> quotient_closure(const CoreGraph& g, int vertex_cap) {
  if (g.vertex_count() > vertex_cap) throw QuotientCapExceeded(g.vertex_count(), vertex_cap);
  std::vector<CoreGraph> out{g};
  std::unordered_set<std::string> seen{canonical_form(g)};
  for (std::size_t next = 0; next < out.size(); ++next) {
    const CoreGraph current = out[next];
    const int n = current.vertex_count();
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        std::vector<int> block(static_cast<std::size_t>(n));
        for (int v = 0, id = 0; v < n; ++v) block[static_cast<std::size_t>(v)] = v == b ? -1 : id++;
        block[static_cast<std::size_t>(b)] = block[static_cast<std::size_t>(a)];
        CoreGraph q = quotient_by(current, block, n - 1);
        if (seen.insert(canonical_form(q)).second) out.push_back(std::move(q));
      }
    }
  }
  return out;
}

std::string describe(const CoreGraph& g) {
  std::ostringstream os;
  os << "vertices " << g.vertex_count() << " (basepoint 0)\n";
  os << "darts " << g.dart_count() << "\n";
  for (const auto& d : g.darts()) {
    os << "  " << d.from << " -" << to_char(Letter(d.label, false)) << "-> " << d.to << "\n";
  }
  os << "rank " << g.subgroup_rank() << "\n";
  return os.str();
}

}  // namespace nbtrace
