#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vkd/rational.hpp"
#include "vkd/words.hpp"

namespace vkd {

enum class RelatorKind { first = 1, second = 2 };

struct ParamSet {
  int n = 0;
  int k = 0;
  int kappa = 0;
  Rational lambda, mu, nu;
  int chi = 0;
  Rational gamma;
  std::int64_t M = 0;
};

// Parameters for index n with a given M; lambda = mu = 1/(4k(7k-5)).
ParamSet make_params(int n, std::int64_t M);
// gamma = lambda + (3 + 2 kappa) mu + 2 nu
Rational gamma_of(int k, const Rational& lambda, const Rational& mu, const Rational& nu);

struct ConditionSpec {
  int n = 0;
  RelatorKind kind = RelatorKind::first;
  GroupWord w;
  int x = 0;          // generator, first kind
  std::int64_t m = 0;  // second kind
};

ConditionSpec enumerate_conditions(int n);

// Letter length of one u-block.
std::int64_t u_length(int k, std::int64_t M);
GroupWord build_u(int i, int k, std::int64_t M);
std::vector<Run> build_u_runs(int i, int k, std::int64_t M);

// Where a relator position sits inside the block layout.
struct BlockRef {
  enum Kind { u_block, u_inverse, core, tail } kind = tail;
  int j = 0;               // 1..k for u blocks and cores
  std::int64_t offset = 0;  // offset inside the block as written
};

struct Relator {
  int n = 0;
  RelatorKind kind = RelatorKind::first;
  GroupWord word;
  int k = 0;
  std::int64_t u_len = 0;
  std::int64_t core_len = 0;  // |w_n| for first kind, |v| for second kind
  std::int64_t tail_len = 0;

  std::int64_t period() const { return 2 * u_len + core_len; }
  std::int64_t u_start(int j) const { return (j - 1) * period(); }
  std::int64_t u_inverse_start(int j) const { return u_start(j) + u_len + core_len; }
  BlockRef locate(std::int64_t pos) const;
  GroupWord u_block(int j) const;
  GroupWord core_block() const;
};

Relator build_relator(const ParamSet& p, const ConditionSpec& spec, const GroupWord& v);

// Rebuild the layout fields of a relator from its word, k and M.
// Returns nullopt if the length does not fit the layout.
std::optional<Relator> relator_from_word(int n, RelatorKind kind, const GroupWord& word, int k,
                                         std::int64_t M, std::int64_t v_len);

enum class Membership { out = 0, in = 1, unknown = 2 };

struct PresentationFamily {
  GroupWord v;
  std::vector<ParamSet> params;  // params[n-1]
  std::vector<Relator> relators;
  std::vector<Membership> in_I;

  int size() const { return static_cast<int>(relators.size()); }
  const Relator& relator(int n) const { return relators[static_cast<std::size_t>(n - 1)]; }
  const ParamSet& param(int n) const { return params[static_cast<std::size_t>(n - 1)]; }
};

struct GenOptions {
  std::int64_t M_cap = std::int64_t{1} << 20;
  std::optional<std::int64_t> force_M;
};

// Smallest feasible M for index n given the earlier part of the family.
ParamSet params_for(int n, const PresentationFamily& earlier, const GenOptions& opt = {});

PresentationFamily generate_family(int n_max, const GenOptions& opt = {});
// Weight the next index would get if the family were extended by one.
Rational next_weight(const PresentationFamily& fam, const GenOptions& opt = {});

struct ConditionReport {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline const std::vector<std::string>& all_condition_names() {
  static const std::vector<std::string> names{"C1", "C2", "C3", "C4", "C5", "C6",
                                              "C7", "C8", "C9", "C10", "C12"};
  return names;
}

// Throws std::invalid_argument for a condition name that is not checkable.
std::vector<ConditionReport> check_conditions(const PresentationFamily& fam, int N,
                                              const std::set<std::string>& which);

// (1 - 2 gamma_n) |r_n|
Rational weight_of(const PresentationFamily& fam, int n);

enum class WordVerdict { trivial, nontrivial, undecided };

// Decides the word problem for the kept relators (given as indices).
using WordSolver = std::function<WordVerdict(const std::vector<int>& kept, const GroupWord& w)>;

Membership decide_index_set(PresentationFamily& fam, int n, const WordSolver& solver);

std::string write_presentation(const PresentationFamily& fam);
PresentationFamily read_presentation(const std::string& text);

}  // namespace vkd
