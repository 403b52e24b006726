#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace resonator {

// A cancellation-free word over the alphabet {0, ..., 2m-1}. Letter j+m is
// the formal inverse of letter j (indices mod 2m). The empty word is the
// identity.
struct ReducedWord {
  std::vector<int> letters;

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }
  auto operator<=>(const ReducedWord&) const = default;
};

inline int inverse_letter(int letter, int m) { return (letter + m) % (2 * m); }

// Consecutive pair (prev, next) is admissible unless they cancel,
// i.e. unless next = prev + m (mod 2m).
inline bool letters_admissible(int prev, int next, int m) {
  return next != inverse_letter(prev, m);
}

bool is_reduced(std::span<const int> letters, int m);

// Reduced, and additionally the last/first pair is admissible, so every
// cyclic rotation is again reduced.
bool is_cyclically_reduced(std::span<const int> letters, int m);

ReducedWord inverse_word(const ReducedWord& w, int m);

// Word-set selectors used throughout: W_N, W_N^j, A_N^{i,j}, Z_N^{l,j}.
struct WordFilter {
  enum class Kind { All, NotEndingIn, FirstLast, ZSet };
  Kind kind = Kind::All;
  int i = -1;  // FirstLast: required first letter. ZSet: the index l (first letter is l+m).
  int j = -1;  // NotEndingIn / ZSet: forbidden last letter. FirstLast: required last letter.

  static WordFilter all() { return {Kind::All, -1, -1}; }
  static WordFilter not_ending_in(int j) { return {Kind::NotEndingIn, -1, j}; }
  static WordFilter first_last(int i, int j) { return {Kind::FirstLast, i, j}; }
  static WordFilter z_set(int l, int j) { return {Kind::ZSet, l, j}; }
};

inline constexpr std::uint64_t kDefaultWordCap = 10'000'000;

// Exact count of reduced words of length N matching the filter.
std::uint64_t count_words(int m, int N, const WordFilter& filter);

// Visits matching words in lexicographic order without storing them.
void for_each_word(int m, int N, const WordFilter& filter,
                   const std::function<void(std::span<const int>)>& visit);

// Stores the enumeration; throws SizeLimit when the count exceeds `cap`.
std::vector<ReducedWord> enumerate_words(int m, int N, const WordFilter& filter,
                                         std::uint64_t cap = kDefaultWordCap);

// Cyclically reduced words of length N in lexicographic order.
void for_each_cyclic_word(int m, int N,
                          const std::function<void(std::span<const int>)>& visit);
std::uint64_t count_cyclic_words(int m, int N);

// True when the word equals a nontrivial rotation of itself, i.e. it is a
// proper power of a shorter word.
bool is_proper_power(std::span<const int> letters);

// Lexicographically minimal rotation.
std::vector<int> canonical_rotation(std::span<const int> letters);

// One representative (minimal rotation) per cyclic class of cyclically
// reduced, not-proper-power words of each length 1..maxLength, in
// (length, lexicographic) order. Throws SizeLimit past `cap` enumerated words.
std::vector<ReducedWord> primitive_word_classes(int m, int maxLength,
                                                std::uint64_t cap = kDefaultWordCap);

}  // namespace resonator
