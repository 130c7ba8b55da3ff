#include "nbtrace/primitivity.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "nbtrace/checked.hpp"
#include "nbtrace/parallel.hpp"

namespace nbtrace {

namespace {

Word single(Letter l, int rank) {
  std::vector<Letter> one{l};
  return Word::from_letters(one, rank);
}

// Calls visit(move) for every non-trivial move until it returns false.
template <class Visit>
void visit_moves(int rank, Visit&& visit) {
  const auto others = static_cast<unsigned>(rank - 1);
  const std::uint64_t patterns = checked_pow(4, others, "whitehead_moves");
  WhiteheadMove move;
  move.rank = rank;
  move.actions.assign(static_cast<std::size_t>(rank), WhiteheadMove::Action::fix);
  for (int m = 0; m < 2 * rank; ++m) {
    move.multiplier = Letter::from_index(m);
    for (std::uint64_t p = 1; p < patterns; ++p) {
      std::uint64_t rest = p;
      // Lowest other generator is the most significant base-4 digit.
      for (int g = rank; g >= 1; --g) {
        if (g == move.multiplier.generator()) {
          move.actions[static_cast<std::size_t>(g - 1)] = WhiteheadMove::Action::fix;
          continue;
        }
        move.actions[static_cast<std::size_t>(g - 1)] = static_cast<WhiteheadMove::Action>(rest % 4);
        rest /= 4;
      }
      if (!visit(move)) return;
    }
  }
}

}  // namespace

Word WhiteheadMove::image_of_generator(int generator) const {
  Letter x(generator, false);
  if (generator == multiplier.generator()) return single(x, rank);
  std::vector<Letter> letters;
  switch (actions.at(static_cast<std::size_t>(generator - 1))) {
    case Action::fix:
      letters = {x};
      break;
    case Action::right_multiply:
      letters = {x, multiplier};
      break;
    case Action::left_multiply_inverse:
      letters = {multiplier.inverse(), x};
      break;
    case Action::conjugate:
      letters = {multiplier.inverse(), x, multiplier};
      break;
  }
  return Word::from_letters(letters, rank);
}

Word WhiteheadMove::apply(const Word& w) const {
  std::vector<Letter> letters;
  letters.reserve(w.length() * 3);
  const Letter a = multiplier;
  for (Letter l : w.letters()) {
    const int g = l.generator();
    Action act = g == a.generator() ? Action::fix : actions[static_cast<std::size_t>(g - 1)];
    Letter x(g, false);
    // Image of x, inverted as a whole for inverse letters.
    std::vector<Letter> image;
    switch (act) {
      case Action::fix: image = {x}; break;
      case Action::right_multiply: image = {x, a}; break;
      case Action::left_multiply_inverse: image = {a.inverse(), x}; break;
      case Action::conjugate: image = {a.inverse(), x, a}; break;
    }
    if (l.inverted()) {
      for (auto it = image.rbegin(); it != image.rend(); ++it) letters.push_back(it->inverse());
    } else {
      letters.insert(letters.end(), image.begin(), image.end());
    }
  }
  return Word::from_letters(letters, rank);
}

std::vector<WhiteheadMove> whitehead_moves(int rank) {
  if (rank < 1) throw std::invalid_argument("whitehead_moves needs rank >= 1");
  std::vector<WhiteheadMove> out;
  visit_moves(rank, [&](const WhiteheadMove& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::uint64_t whitehead_move_count(int rank) {
  if (rank < 1) throw std::invalid_argument("whitehead_move_count needs rank >= 1");
  const char* what = "whitehead_move_count";
  return checked_mul(2 * static_cast<std::uint64_t>(rank),
                     checked_pow(4, static_cast<unsigned>(rank - 1), what) - 1, what);
}

bool is_primitive(const Word& w, int rank) {
  Word u = cyclic_reduce(w.with_rank(rank));
  if (u.empty()) return false;
  // In F_1 the only primitive elements are y and y^-1.
  if (rank == 1) return u.length() == 1;
  while (u.length() > 1) {
    std::optional<Word> best;
    visit_moves(rank, [&](const WhiteheadMove& m) {
      Word v = cyclic_reduce(m.apply(u));
      if (v.length() < (best ? best->length() : u.length())) best = std::move(v);
      return true;
    });
    if (!best) return false;
    u = std::move(*best);
  }
  return true;
}

bool is_primitive(const Word& w) { return is_primitive(w, w.rank()); }

bool is_proper_power(const Word& w) {
  Word u = cyclic_reduce(w);
  const std::size_t t = u.length();
  for (std::size_t p = 1; p < t; ++p) {
    if (t % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < t && periodic; ++i) periodic = u[i] == u[i - p];
    if (periodic) return true;
  }
  return false;
}

WordClassification primitivity_rank(const Word& w, const ClassifyOptions& options) {
  WordClassification result{w, {}, {}};
  const Word u = cyclic_reduce(w);
  if (u.empty()) {
    result.pi.value = 0;
    return result;
  }
  const int k = w.rank();
  if (is_primitive(u, k)) return result;

  // Some quotient (the sub-bouquet on the letters of u) has rank <= k and
  // holds u imprimitively, so the scan below always finds best <= k.
  int best = k + 1;
  for_each_quotient(core_of_word(u), options.vertex_cap, [&](const CoreGraph& q) {
    const int r = q.subgroup_rank();
    if (r > best || r < 1 || !contains(q, u)) return;
    SubgroupBasis basis = basis_of(q, options.tie_break_seed);
    Word y = rewrite_in_basis(q, basis, u);
    if (is_primitive(y, r)) return;
    if (r < best) {
      best = r;
      result.crit.clear();
    }
    result.crit.push_back(q);
  });
  if (best > k) throw std::logic_error("no critical subgroup found for imprimitive " + to_string(w));
  result.pi.value = best;
  return result;
}

Word orbit_representative(const Word& w) {
  const Word u = cyclic_reduce(w);
  const int k = w.rank();
  const std::size_t t = u.length();
  if (t == 0) return u;

  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<int> best;
  std::vector<int> image(t);
  std::vector<int> mapped(t);
  do {
    for (unsigned signs = 0; signs < (1u << k); ++signs) {
      for (std::size_t i = 0; i < t; ++i) {
        Letter l = u[i];
        int g = perm[static_cast<std::size_t>(l.generator() - 1)];
        bool inv = l.inverted() != (((signs >> (l.generator() - 1)) & 1u) != 0);
        mapped[i] = Letter(g, inv).index();
      }
      for (int direction = 0; direction < 2; ++direction) {
        for (std::size_t shift = 0; shift < t; ++shift) {
          for (std::size_t i = 0; i < t; ++i) {
            if (direction == 0) {
              image[i] = mapped[(i + shift) % t];
            } else {
              // Inverse word: reversed order, each letter inverted.
              image[i] = mapped[(t - 1 - i + shift) % t] ^ 1;
            }
          }
          if (best.empty() || image < best) best = image;
        }
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Letter> letters;
  letters.reserve(t);
  for (int idx : best) letters.push_back(Letter::from_index(idx));
  return Word::from_letters(letters, k);
}

namespace {

ClassSummary summarize(const Word& rep, const ClassifyOptions& options) {
  WordClassification c = primitivity_rank(rep, options);
  ClassSummary s;
  s.pi = c.pi;
  s.crit_size = c.crit.size();
  for (const auto& g : c.crit) s.crit_forms.push_back(canonical_form(g));
  return s;
}

bool rep_less(const std::pair<Word, ClassSummary>& e, const Word& w) { return e.first < w; }

}  // namespace

const ClassSummary& ClassificationCache::classify(const Word& w) {
  Word rep = orbit_representative(w);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), rep, rep_less);
  if (it != entries_.end() && it->first == rep) return it->second;
  ClassSummary s = summarize(rep, options_);
  it = entries_.insert(it, {rep, std::move(s)});
  return it->second;
}

void ClassificationCache::fill(const std::vector<Word>& words, int workers) {
  std::set<Word> missing;
  for (const auto& w : words) {
    Word rep = orbit_representative(w);
    if (lookup(rep) == nullptr) missing.insert(std::move(rep));
  }
  std::vector<Word> reps(missing.begin(), missing.end());
  std::vector<ClassSummary> summaries(reps.size());
  parallel_for(reps.size(), workers, [&](std::size_t i) { summaries[i] = summarize(reps[i], options_); });
  for (std::size_t i = 0; i < reps.size(); ++i) entries_.emplace_back(reps[i], std::move(summaries[i]));
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

const ClassSummary* ClassificationCache::lookup(const Word& w) const {
  Word rep = orbit_representative(w);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), rep, rep_less);
  if (it != entries_.end() && it->first == rep) return &it->second;
  return nullptr;
}

std::uint64_t crit_sum(int rank, int length, int m, WordDomain domain, const ClassifyOptions& options) {
  if (m < 0 || m > rank) throw std::invalid_argument("crit_sum target rank m must lie in 0..k");
  // x1^length is imprimitive for length >= 2 and its core has `length` vertices.
  if (length >= 2 && length > options.vertex_cap) throw QuotientCapExceeded(length, options.vertex_cap);
  std::vector<Word> words = domain == WordDomain::cyclically_reduced
                                ? enumerate_cyclically_reduced(rank, length)
                                : enumerate_reduced(rank, length);
  ClassificationCache cache(options);
  cache.fill(words, resolve_workers(options.workers));
  std::uint64_t total = 0;
  for (const auto& w : words) {
    const ClassSummary* s = cache.lookup(w);
    if (s->pi.value == m) total = checked_add(total, s->crit_size, "crit_sum");
  }
  return total;
}

}  // namespace nbtrace
