#include "nbtrace/word.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "nbtrace/checked.hpp"

namespace nbtrace {

namespace {

void check_rank(int rank) {
  if (rank < 1) {
    throw std::invalid_argument("rank must be positive, got " + std::to_string(rank));
  }
}

void check_text_rank(int rank) {
  if (rank < 1 || rank > 26) {
    throw std::invalid_argument("text words need rank in 1..26, got " + std::to_string(rank));
  }
}

}  // namespace

Word::Word(int rank) : rank_(rank) { check_rank(rank); }

Word Word::from_letters(std::span<const Letter> letters, int rank) {
  check_rank(rank);
  Word w(rank);
  w.letters_.reserve(letters.size());
  for (Letter l : letters) {
    if (l.generator() < 1 || l.generator() > rank) {
      throw std::invalid_argument("letter x" + std::to_string(l.generator()) +
                                  " outside rank " + std::to_string(rank));
    }
    if (!w.letters_.empty() && w.letters_.back() == l.inverse()) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(l);
    }
  }
  return w;
}

Word Word::inverse() const {
  Word w(rank_);
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    w.letters_.push_back(it->inverse());
  }
  return w;
}

Word Word::with_rank(int rank) const {
  check_rank(rank);
  if (max_generator() > rank) {
    throw std::invalid_argument("word uses generators beyond rank " + std::to_string(rank));
  }
  Word w = *this;
  w.rank_ = rank;
  return w;
}

int Word::max_generator() const {
  int m = 0;
  for (Letter l : letters_) m = std::max(m, l.generator());
  return m;
}

Word operator*(const Word& lhs, const Word& rhs) {
  std::vector<Letter> all(lhs.letters_.begin(), lhs.letters_.end());
  all.insert(all.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word::from_letters(all, std::max(lhs.rank_, rhs.rank_));
}

std::strong_ordering Word::operator<=>(const Word& other) const {
  if (auto c = rank_ <=> other.rank_; c != 0) return c;
  if (auto c = letters_.size() <=> other.letters_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(letters_.begin(), letters_.end(),
                                                other.letters_.begin(), other.letters_.end());
}

Word reduce(std::span<const Letter> letters, int rank) {
  return Word::from_letters(letters, rank);
}

Word cyclic_reduce(const Word& w) {
  auto letters = w.letters();
  std::size_t lo = 0;
  std::size_t hi = letters.size();
  while (hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  return Word::from_letters(letters.subspan(lo, hi - lo), w.rank());
}

bool is_cyclically_reduced(const Word& w) {
  return w.length() < 2 || w.front() != w.back().inverse();
}

Word power(const Word& u, int exponent) {
  Word base = exponent < 0 ? u.inverse() : u;
  Word out(u.rank());
  for (int i = 0; i < std::abs(exponent); ++i) out = out * base;
  return out;
}

Word parse_word(std::string_view text, int rank) {
  check_text_rank(rank);
  std::vector<Letter> letters;
  letters.reserve(text.size());
  for (char c : text) {
    int generator = 0;
    bool inverted = false;
    if (c >= 'a' && c <= 'z') {
      generator = c - 'a' + 1;
    } else if (c >= 'A' && c <= 'Z') {
      generator = c - 'A' + 1;
      inverted = true;
    } else {
      throw std::invalid_argument(std::string("unknown character '") + c + "' in word");
    }
    if (generator > rank) {
      throw std::invalid_argument(std::string("letter '") + c + "' beyond rank " +
                                  std::to_string(rank));
    }
    letters.emplace_back(generator, inverted);
  }
  return Word::from_letters(letters, rank);
}

char to_char(Letter l) {
  if (l.generator() < 1 || l.generator() > 26) {
    throw std::invalid_argument("generator x" + std::to_string(l.generator()) +
                                " has no single-character form");
  }
  char base = l.inverted() ? 'A' : 'a';
  return static_cast<char>(base + l.generator() - 1);
}

std::string to_string(const Word& w) {
  std::string s;
  s.reserve(w.length());
  for (Letter l : w.letters()) s.push_back(to_char(l));
  return s;
}

WordCount count_cyclically_reduced(int rank, int length) {
  if (rank < 1 || length < 1) {
    throw std::invalid_argument("count_cyclically_reduced needs k >= 1 and t >= 1");
  }
  const char* what = "count_cyclically_reduced";
  auto k = static_cast<std::uint64_t>(rank);
  std::uint64_t count = checked_pow(2 * k - 1, static_cast<unsigned>(length), what);
  // (-1)^t (k-1) combined with +k: t even adds 2k-1, t odd adds 1.
  count = checked_add(count, length % 2 == 0 ? 2 * k - 1 : 1, what);
  return WordCount{rank, length, count};
}

std::uint64_t count_reduced(int rank, int length) {
  if (rank < 1 || length < 0) {
    throw std::invalid_argument("count_reduced needs k >= 1 and t >= 0");
  }
  if (length == 0) return 1;
  auto k = static_cast<std::uint64_t>(rank);
  const char* what = "count_reduced";
  return checked_mul(2 * k, checked_pow(2 * k - 1, static_cast<unsigned>(length - 1), what),
                     what);
}

WordEnumerator::WordEnumerator(int rank, int length, bool cyclic_only)
    : rank_(rank), length_(length), cyclic_only_(cyclic_only) {
  check_rank(rank);
  if (length < 0 || (cyclic_only && length < 1)) {
    throw std::invalid_argument("invalid enumeration length " + std::to_string(length));
  }
  digits_.assign(static_cast<std::size_t>(length), 0);
}

// Smallest valid digits at positions pos.. given the prefix. Always succeeds
// for 2k >= 2 since at most one digit is excluded per position.
bool WordEnumerator::fill_from(std::size_t pos) {
  for (std::size_t i = pos; i < digits_.size(); ++i) {
    int d = 0;
    if (i > 0 && d == (digits_[i - 1] ^ 1)) ++d;
    if (d >= 2 * rank_) return false;
    digits_[i] = d;
  }
  return true;
}

bool WordEnumerator::advance() {
  auto pos = static_cast<std::ptrdiff_t>(digits_.size()) - 1;
  while (pos >= 0) {
    auto i = static_cast<std::size_t>(pos);
    int d = digits_[i] + 1;
    if (i > 0 && d == (digits_[i - 1] ^ 1)) ++d;
    if (d < 2 * rank_) {
      digits_[i] = d;
      return fill_from(i + 1);
    }
    --pos;
  }
  return false;
}

bool WordEnumerator::accept() const {
  if (!cyclic_only_ || digits_.size() < 2) return true;
  return digits_.back() != (digits_.front() ^ 1);
}

std::optional<Word> WordEnumerator::next() {
  if (done_) return std::nullopt;
  bool ok = started_ ? advance() : fill_from(0);
  started_ = true;
  while (ok && !accept()) ok = advance();
  if (!ok) {
    done_ = true;
    return std::nullopt;
  }
  std::vector<Letter> letters;
  letters.reserve(digits_.size());
  for (int d : digits_) letters.push_back(Letter::from_index(d));
  if (length_ == 0) done_ = true;
  return Word::from_letters(letters, rank_);
}

std::vector<Word> enumerate_reduced(int rank, int length) {
  std::vector<Word> out;
  WordEnumerator e(rank, length, false);
  while (auto w = e.next()) out.push_back(std::move(*w));
  return out;
}

std::vector<Word> enumerate_cyclically_reduced(int rank, int length) {
  std::vector<Word> out;
  WordEnumerator e(rank, length, true);
  while (auto w = e.next()) out.push_back(std::move(*w));
  return out;
}

}  // namespace nbtrace
