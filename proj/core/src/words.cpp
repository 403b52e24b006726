#include "resonator/words.hpp"

#include <algorithm>
#include <string>

#include "resonator/errors.hpp"

namespace resonator {

bool is_reduced(std::span<const int> letters, int m) {
  for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
    if (!letters_admissible(letters[i], letters[i + 1], m)) return false;
  }
  return true;
}

bool is_cyclically_reduced(std::span<const int> letters, int m) {
  if (!is_reduced(letters, m)) return false;
  if (letters.size() >= 2 &&
      !letters_admissible(letters.back(), letters.front(), m)) {
    return false;
  }
  return true;
}

ReducedWord inverse_word(const ReducedWord& w, int m) {
  ReducedWord inv;
  inv.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    inv.letters.push_back(inverse_letter(*it, m));
  }
  return inv;
}

namespace {

bool first_letter_ok(const WordFilter& f, int letter, int m) {
  switch (f.kind) {
    case WordFilter::Kind::FirstLast:
      return letter == f.i;
    case WordFilter::Kind::ZSet:
      return letter == inverse_letter(f.i, m);
    default:
      return true;
  }
}

bool last_letter_ok(const WordFilter& f, int letter) {
  switch (f.kind) {
    case WordFilter::Kind::NotEndingIn:
      return letter != f.j;
    case WordFilter::Kind::FirstLast:
      return letter == f.j;
    case WordFilter::Kind::ZSet:
      return letter != f.j;
    default:
      return true;
  }
}

}  // namespace

std::uint64_t count_words(int m, int N, const WordFilter& filter) {
  if (N <= 0) return 0;
  const int k = 2 * m;
  // DP over the last letter.
  std::vector<std::uint64_t> cur(k, 0);
  for (int l = 0; l < k; ++l) {
    if (first_letter_ok(filter, l, m)) cur[l] = 1;
  }
  for (int step = 1; step < N; ++step) {
    std::vector<std::uint64_t> next(k, 0);
    std::uint64_t total = 0;
    for (int l = 0; l < k; ++l) total += cur[l];
    for (int l = 0; l < k; ++l) {
      // All previous letters allow l except its inverse.
      next[l] = total - cur[inverse_letter(l, m)];
    }
    cur.swap(next);
  }
  std::uint64_t out = 0;
  for (int l = 0; l < k; ++l) {
    if (last_letter_ok(filter, l)) out += cur[l];
  }
  return out;
}

namespace {

void dfs_words(int m, int N, const WordFilter& filter, std::vector<int>& word,
               const std::function<void(std::span<const int>)>& visit) {
  const int depth = static_cast<int>(word.size());
  if (depth == N) {
    visit(word);
    return;
  }
  const int k = 2 * m;
  for (int l = 0; l < k; ++l) {
    if (depth == 0) {
      if (!first_letter_ok(filter, l, m)) continue;
    } else if (!letters_admissible(word[depth - 1], l, m)) {
      continue;
    }
    if (depth == N - 1 && !last_letter_ok(filter, l)) continue;
    word.push_back(l);
    dfs_words(m, N, filter, word, visit);
    word.pop_back();
  }
}

}  // namespace

void for_each_word(int m, int N, const WordFilter& filter,
                   const std::function<void(std::span<const int>)>& visit) {
  if (N <= 0) return;
  std::vector<int> word;
  word.reserve(N);
  dfs_words(m, N, filter, word, visit);
}

std::vector<ReducedWord> enumerate_words(int m, int N, const WordFilter& filter,
                                         std::uint64_t cap) {
  const std::uint64_t n = count_words(m, N, filter);
  if (n > cap) {
    throw SizeLimit("enumeration of " + std::to_string(n) +
                    " words exceeds cap " + std::to_string(cap));
  }
  std::vector<ReducedWord> out;
  out.reserve(n);
  for_each_word(m, N, filter, [&](std::span<const int> w) {
    out.push_back(ReducedWord{std::vector<int>(w.begin(), w.end())});
  });
  return out;
}

void for_each_cyclic_word(int m, int N,
                          const std::function<void(std::span<const int>)>& visit) {
  if (N <= 0) return;
  if (N == 1) {
    std::vector<int> w(1);
    for (int l = 0; l < 2 * m; ++l) {
      w[0] = l;
      visit(w);
    }
    return;
  }
  for_each_word(m, N, WordFilter::all(), [&](std::span<const int> w) {
    if (letters_admissible(w.back(), w.front(), m)) visit(w);
  });
}

std::uint64_t count_cyclic_words(int m, int N) {
  std::uint64_t n = 0;
  for_each_cyclic_word(m, N, [&](std::span<const int>) { ++n; });
  return n;
}

bool is_proper_power(std::span<const int> letters) {
  const int n = static_cast<int>(letters.size());
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (int i = 0; i + d < n && periodic; ++i) {
      periodic = letters[i] == letters[i + d];
    }
    if (periodic) return true;
  }
  return false;
}

std::vector<int> canonical_rotation(std::span<const int> letters) {
  const int n = static_cast<int>(letters.size());
  std::vector<int> best(letters.begin(), letters.end());
  std::vector<int> rot(n);
  for (int r = 1; r < n; ++r) {
    for (int i = 0; i < n; ++i) rot[i] = letters[(i + r) % n];
    if (rot < best) best = rot;
  }
  return best;
}

std::vector<ReducedWord> primitive_word_classes(int m, int maxLength,
                                                std::uint64_t cap) {
  std::vector<ReducedWord> out;
  std::uint64_t visited = 0;
  for (int N = 1; N <= maxLength; ++N) {
    std::vector<std::vector<int>> reps;
    for_each_cyclic_word(m, N, [&](std::span<const int> w) {
      if (++visited > cap) {
        throw SizeLimit("primitive class enumeration exceeds cap " +
                        std::to_string(cap));
      }
      if (is_proper_power(w)) return;
      auto canon = canonical_rotation(w);
      // Lexicographic DFS order: the canonical word is first reached as itself.
      if (std::equal(canon.begin(), canon.end(), w.begin())) {
        reps.push_back(std::move(canon));
      }
    });
    for (auto& r : reps) out.push_back(ReducedWord{std::move(r)});
  }
  return out;
}

}  // namespace resonator
