#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nbtrace/word.hpp"

namespace nbtrace {

// A labeled dart u --label--> v. The reverse traversal is implied.
struct LabeledDart {
  int from = 0;
  int to = 0;
  int label = 1;  // generator index 1..k

  bool operator==(const LabeledDart&) const = default;
  auto operator<=>(const LabeledDart&) const = default;
};

// Unfolded input to `fold`: any finite labeled digraph with a basepoint.
struct PreGraph {
  int rank = 1;
  int vertex_count = 1;
  int basepoint = 0;
  std::vector<LabeledDart> darts;
};

class QuotientCapExceeded : public std::runtime_error {
 public:
  QuotientCapExceeded(int vertices, int cap);
  int vertices() const { return vertices_; }
  int cap() const { return cap_; }

 private:
  int vertices_;
  int cap_;
};

// Stallings core graph of a finitely generated subgroup of F_k. Always folded,
// connected and trimmed; vertex 0 is the basepoint.
class CoreGraph {
 public:
  static constexpr int kNone = -1;

  int rank() const { return rank_; }  // ambient rank k
  int vertex_count() const { return vertex_count_; }
  int dart_count() const { return static_cast<int>(darts_.size()); }
  const std::vector<LabeledDart>& darts() const { return darts_; }

  // Rank of the represented subgroup: #darts - #vertices + 1.
  int subgroup_rank() const { return dart_count() - vertex_count_ + 1; }

  // Index of the dart leaving (entering) v with `label`, or kNone.
  int out_dart(int v, int label) const { return out_[slot(v, label)]; }
  int in_dart(int v, int label) const { return in_[slot(v, label)]; }

  // Vertex reached from v by reading `l`, or kNone.
  int step(int v, Letter l) const;

  friend CoreGraph fold(const PreGraph& g);

 private:
  std::size_t slot(int v, int label) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(rank_) +
           static_cast<std::size_t>(label - 1);
  }

  int rank_ = 1;
  int vertex_count_ = 1;
  std::vector<LabeledDart> darts_;
  std::vector<int> out_;
  std::vector<int> in_;
};

// Folds, restricts to the basepoint component and trims hanging vertices.
// Vertices of the result are numbered breadth-first from the basepoint.
CoreGraph fold(const PreGraph& g);

CoreGraph core_of_word(const Word& w);
// One vertex with k loops; represents F_k itself.
CoreGraph bouquet(int rank);

bool contains(const CoreGraph& g, const Word& w);

// Equal for two core graphs iff they are isomorphic as basepointed labeled digraphs.
std::string canonical_form(const CoreGraph& g);

struct SubgroupBasis {
  std::vector<Word> basis;
  // Per vertex, the label read along the tree from the basepoint.
  std::vector<Word> tree_paths;
  // Per dart, the basis index it generates, or -1 for tree darts.
  std::vector<int> dart_to_generator;
};

// Breadth-first spanning tree from the basepoint, exploring labels in order and
// outgoing before incoming darts. Supplying `tie_break_seed` shuffles the
// exploration order instead; the spanned subgroup is the same.
SubgroupBasis basis_of(const CoreGraph& g, std::optional<std::uint64_t> tie_break_seed = {});

// Word over rank(g) fresh generators y_1.. whose expansion in `basis` is w.
// Throws std::invalid_argument when w is not in the subgroup.
Word rewrite_in_basis(const CoreGraph& g, const SubgroupBasis& basis, const Word& w);
Word expand_in_basis(const SubgroupBasis& basis, const Word& y_word, int rank);

inline constexpr int kDefaultQuotientCap = 10;

// All distinct folded quotients of g, one per canonical form, over every set
// partition of its vertices. The first entry is g itself.
std::vector<CoreGraph> quotients(const CoreGraph& g, int vertex_cap = kDefaultQuotientCap);

// Streaming form of `quotients`; the callback sees each distinct quotient once.
void for_each_quotient(const CoreGraph& g, int vertex_cap,
                       const std::function<void(const CoreGraph&)>& visit);

// Closure of {g} under merging pairs of vertices and folding. Reaches the same
// set of quotients as the partition enumeration.
std::vector<CoreGraph> quotient_closure(const CoreGraph& g, int vertex_cap = kDefaultQuotientCap);

std::string describe(const CoreGraph& g);

}  // namespace nbtrace
