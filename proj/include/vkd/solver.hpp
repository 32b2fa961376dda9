#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vkd/diagram.hpp"
#include "vkd/presgen.hpp"
#include "vkd/rational.hpp"
#include "vkd/words.hpp"

namespace vkd {

// A finite set of relators with the weight (1 - 2 gamma)|r| of each.
struct Subpresentation {
  RelatorTable relators;
  std::map<int, Rational> weight;
  bool foreign = false;  // weights not backed by the generated family
};

Subpresentation empty_presentation();
// Relators of the family with the given indices.
Subpresentation subpresentation(const PresentationFamily& fam, const std::vector<int>& kept);
// Arbitrary relators with one common gamma; the solver refuses these
// unless the isoperimetric hypothesis is asserted.
Subpresentation foreign_presentation(const RelatorTable& rel, const Rational& gamma = Rational(0));

// Least n with floor(n + 1) > L, where floor(n) = n bounds (1 - 2 gamma_n)|r_n|
// from below.
int find_cutoff(const PresentationFamily& fam, std::int64_t L);

struct Budget {
  Rational weighted_area_cap;
  int face_cap = 0;
};
// Cap for one contour of length L (or a pair of total length L).
Budget make_budget(const Subpresentation& sub, std::int64_t L);

enum class Shape { disc, annular };

// All diagrams of the given shape up to labeled isomorphism whose contour
// lengths are `lengths` (one entry for a disc, two for an annulus) and whose
// weighted area fits the budget. Diagrams are grown from a vertex (or a
// cycle) by adding spikes and attaching faces along contour segments.
// `state_cap` bounds the number of distinct intermediate diagrams; nullopt
// when it is exceeded.
std::optional<std::vector<Diagram>> enumerate_diagrams(const Subpresentation& sub, const Budget& budget, Shape shape,
                                                       const std::vector<int>& lengths, long state_cap = 200000);

struct SolveOptions {
  long node_cap = 20000;          // search states before giving up
  bool assert_isoperimetric = false;  // allow foreign presentations
};

struct WordResult {
  WordVerdict verdict = WordVerdict::undecided;
  std::optional<Diagram> certificate;  // disc diagram with contour label w
  int faces = 0;
  std::string note;
};

WordResult solve_word(const Subpresentation& sub, const GroupWord& w, const SolveOptions& opt = {});
// Uses the relators of I up to the cutoff for |w|.
WordResult solve_word(const PresentationFamily& fam, const GroupWord& w, const SolveOptions& opt = {});

enum class ConjVerdict { conjugate, not_conjugate, undecided };
const char* conj_verdict_name(ConjVerdict v);
const char* word_verdict_name(WordVerdict v);

struct ConjResult {
  ConjVerdict verdict = ConjVerdict::undecided;
  // annular diagram with contour labels w1 and w2^-1; when both words are
  // trivial the certificate is the disc diagram of w1 w2^-1 instead
  std::optional<Diagram> certificate;
  std::string note;
};

ConjResult solve_conjugacy(const Subpresentation& sub, const GroupWord& w1, const GroupWord& w2,
                           const SolveOptions& opt = {});
ConjResult solve_conjugacy(const PresentationFamily& fam, const GroupWord& w1, const GroupWord& w2,
                           const SolveOptions& opt = {});

enum class OracleVerdict { trivial, nontrivial_within_radius, unknown };
const char* oracle_verdict_name(OracleVerdict v);

struct OracleOptions {
  int radius = 1;
  std::size_t insert_len_cap = 24;  // insertions only into words this short
  long state_cap = 200000;
};
// Breadth-first search over words obtained by deleting or inserting
// u r^{+-1} u^-1 with |u| <= radius, at most `radius` moves deep.
OracleVerdict oracle_word(const RelatorTable& rel, const GroupWord& w, const OracleOptions& opt = {});

// Adaptor for decide_index_set.
WordSolver family_word_solver(const PresentationFamily& fam, const SolveOptions& opt = {});

}  // namespace vkd
