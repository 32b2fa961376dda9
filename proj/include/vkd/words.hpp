#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vkd {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A letter is a (generator, sign) pair packed into one byte: bit 0 is the
// generator (0 = a, 1 = b), bit 1 is set for the inverse.
struct Letter {
  std::uint8_t code = 0;

  constexpr Letter() = default;
  constexpr Letter(int gen, int sign)
      : code(static_cast<std::uint8_t>((gen & 1) | (sign < 0 ? 2 : 0))) {}

  static constexpr Letter from_code(int c) {
    Letter l;
    l.code = static_cast<std::uint8_t>(c & 3);
    return l;
  }

  constexpr int gen() const { return code & 1; }
  constexpr int sign() const { return (code & 2) ? -1 : 1; }
  constexpr Letter inv() const { return from_code(code ^ 2); }
  char to_char() const { return "abAB"[code]; }

  friend constexpr bool operator==(Letter x, Letter y) { return x.code == y.code; }
  friend constexpr bool operator!=(Letter x, Letter y) { return x.code != y.code; }
  friend constexpr bool operator<(Letter x, Letter y) { return x.code < y.code; }
};

inline constexpr Letter kA{0, 1};
inline constexpr Letter kB{1, 1};

using GroupWord = std::vector<Letter>;

GroupWord parse_word(std::string_view text);
std::string format_word(const GroupWord& w);
std::optional<Letter> parse_letter(char c);

GroupWord inverse(const GroupWord& w);
GroupWord concat(const GroupWord& x, const GroupWord& y);
GroupWord power(const GroupWord& w, std::int64_t e);
GroupWord letter_power(Letter l, std::int64_t e);
GroupWord rotate(const GroupWord& w, std::size_t k);

bool is_reduced(const GroupWord& w);
bool is_cyclically_reduced(const GroupWord& w);
GroupWord free_reduce(const GroupWord& w);

struct CyclicReduction {
  GroupWord core;
  GroupWord conjugator;
};
// w is freely equal to conjugator * core * conjugator^-1.
CyclicReduction cyclic_reduce(const GroupWord& w);

// Free reduction followed by cyclic reduction, keeping only the core.
GroupWord cyclic_core(const GroupWord& w);

struct PowerDecomposition {
  GroupWord root;
  int exponent = 1;
};
std::optional<PowerDecomposition> is_proper_power(const GroupWord& w);

// Smallest period p of w dividing |w| (|w| when primitive).
std::size_t primitive_period(const GroupWord& w);

// True if u is a cyclic shift of v (same length).
bool is_rotation_of(const GroupWord& u, const GroupWord& v);
// Offset k with rotate(v, k) == u, or nullopt.
std::optional<std::size_t> rotation_offset(const GroupWord& u, const GroupWord& v);
// Lexicographically least rotation.
GroupWord min_rotation(const GroupWord& w);

struct Run {
  Letter letter;
  std::int64_t len = 0;
};
std::vector<Run> to_runs(const GroupWord& w);
GroupWord from_runs(const std::vector<Run>& runs);

struct CommonSubword {
  std::int64_t length = 0;
  std::int64_t pos_u = -1;
  std::int64_t pos_v = -1;
};

// Longest word occurring in both u and v.  With distinct_occurrence set the
// two arguments are taken to be the same word and occurrences at identical
// positions are ignored.
CommonSubword max_common_subword(const GroupWord& u, const GroupWord& v,
                                 bool distinct_occurrence = false);
CommonSubword max_common_subword_runs(const std::vector<Run>& u,
                                      const std::vector<Run>& v,
                                      bool distinct_occurrence = false);

// Longest subword of w that is also a subword of some concatenation of
// copies of z1^{+-1} = a^{+-2} and z2^{+-1} = b^{+-2}.
std::int64_t max_z_overlap_runs(const std::vector<Run>& w);
std::int64_t max_z_overlap(const GroupWord& w);

struct ZFactor {
  int index = 1;  // 1 for z1 = a^2, 2 for z2 = b^2
  int exponent = 1;
  friend bool operator==(const ZFactor&, const ZFactor&) = default;
};
using ZSpec = std::vector<ZFactor>;

GroupWord z_word(const ZSpec& spec);
std::optional<ZSpec> is_z_concatenation(const GroupWord& w);

GroupWord build_test_word(int n);

// [x,y] = x^2 (x^-1 y)^2 (y^-1)^2, so each pair contributes three roots.
std::vector<GroupWord> commutators_to_squares(
    const std::vector<std::pair<GroupWord, GroupWord>>& pairs);

GroupWord commutator(const GroupWord& x, const GroupWord& y);

// Word number `index` in the order: shorter first, then lexicographic with
// letters ordered a < b < A < B.
GroupWord word_at(std::uint64_t index);

}  // namespace vkd
