#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nbtrace {

// A generator x_i (i >= 1) or its inverse. Stored as +i / -i.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int generator, bool inverted)
      : value_(inverted ? -generator : generator) {}

  static constexpr Letter from_signed(int value) {
    Letter l;
    l.value_ = value;
    return l;
  }

  constexpr int generator() const { return value_ < 0 ? -value_ : value_; }
  constexpr bool inverted() const { return value_ < 0; }
  constexpr int signed_value() const { return value_; }
  constexpr Letter inverse() const { return from_signed(-value_); }

  // Position in the alphabet a < A < b < B < ...; used as the enumeration order.
  constexpr int index() const { return 2 * (generator() - 1) + (inverted() ? 1 : 0); }
  static constexpr Letter from_index(int index) {
    return Letter(index / 2 + 1, (index % 2) == 1);
  }

  constexpr bool operator==(const Letter&) const = default;
  constexpr std::strong_ordering operator<=>(const Letter& other) const {
    return index() <=> other.index();
  }

 private:
  int value_ = 0;
};

// A reduced word in the free group F_k. The rank k is part of the value.
class Word {
 public:
  Word() = default;
  explicit Word(int rank);

  // Freely reduces `letters`. Throws std::invalid_argument when a letter
  // lies outside 1..rank.
  static Word from_letters(std::span<const Letter> letters, int rank);

  int rank() const { return rank_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::span<const Letter> letters() const { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const;
  // Same letters, viewed in F_rank with rank >= the largest generator used.
  Word with_rank(int rank) const;
  int max_generator() const;

  friend Word operator*(const Word& lhs, const Word& rhs);
  bool operator==(const Word&) const = default;
  std::strong_ordering operator<=>(const Word& other) const;

 private:
  int rank_ = 1;
  std::vector<Letter> letters_;
};

Word reduce(std::span<const Letter> letters, int rank);

// Deletes mutually inverse first/last letters until none remain.
Word cyclic_reduce(const Word& w);
bool is_cyclically_reduced(const Word& w);

// u^e for a signed exponent e.
Word power(const Word& u, int exponent);

// Lowercase letters a..z are x_1..x_26, uppercase their inverses. The text
// form is limited to rank <= 26.
Word parse_word(std::string_view text, int rank);
std::string to_string(const Word& w);
char to_char(Letter l);

struct WordCount {
  int rank = 0;
  int length = 0;
  std::uint64_t count = 0;
};

// (2k-1)^t + k + (-1)^t (k-1), exact. Throws std::overflow_error.
WordCount count_cyclically_reduced(int rank, int length);
// 2k (2k-1)^(t-1) for t >= 1, 1 for t = 0. Throws std::overflow_error.
std::uint64_t count_reduced(int rank, int length);

// Streams reduced words of a fixed length in lexicographic order over the
// alphabet a < A < b < B < ... . With `cyclic_only`, words whose last letter is
// the inverse of the first are skipped.
class WordEnumerator {
 public:
  WordEnumerator(int rank, int length, bool cyclic_only);

  std::optional<Word> next();

 private:
  bool advance();
  bool fill_from(std::size_t pos);
  bool accept() const;

  int rank_;
  int length_;
  bool cyclic_only_;
  bool started_ = false;
  bool done_ = false;
  std::vector<int> digits_;
};

std::vector<Word> enumerate_reduced(int rank, int length);
std::vector<Word> enumerate_cyclically_reduced(int rank, int length);

}  // namespace nbtrace
