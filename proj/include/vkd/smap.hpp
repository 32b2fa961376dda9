#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vkd/diagram.hpp"
#include "vkd/presgen.hpp"
#include "vkd/rational.hpp"
#include "vkd/surface.hpp"

namespace vkd {

using RelatorLayouts = std::map<int, Relator>;

// Selection data of one face, indexed by positions of its characteristic
// boundary.
struct FaceSel {
  int index = 0;             // relator index; -1 for outer faces of a closure
  std::vector<int> reading;  // darts of the characteristic boundary
  std::vector<char> sel;     // edge at p lies on a selected path
  std::vector<char> link;    // positions p and p+1 lie on one selected path
  std::vector<std::int64_t> tag;  // u-block letter at p, -1 outside u-blocks
  std::int64_t u_len = 0;
};

struct SMap {
  CombMap map;
  std::vector<FaceSel> face;
  std::vector<std::vector<int>> exceptional;  // arcs as dart paths
};

inline std::int64_t u_tag(int n, int j, std::int64_t idx) {
  return (static_cast<std::int64_t>(n) << 48) | (static_cast<std::int64_t>(j) << 32) | idx;
}
inline std::int64_t u_tag_index(std::int64_t tag) { return tag & 0xffffffffLL; }

RelatorLayouts layouts_of(const PresentationFamily& fam);

// S-map of a diagram over the generated relators. With `with_closure` the
// contours become outer faces whose nontrivial reduced paths are all
// selected; every contour label must then be a cyclically reduced
// z-concatenation. Throws std::invalid_argument otherwise.
SMap derive_smap(const Diagram& d, const RelatorLayouts& rel, bool with_closure = false);

// Maximal paths whose intermediate vertices have degree 2.
struct Arc {
  std::vector<int> darts;
  bool internal = false;  // every edge lies on two faces
};
std::vector<Arc> arcs(const CombMap& m);

// Maximal selected internal arcs.
std::vector<std::vector<int>> selected_arcs(const SMap& s);

// Index of the faces incident to an arc (the first incident face).
int arc_index(const SMap& s, const std::vector<int>& arc);

// (kappa, kappa')
std::pair<int, int> kappa(const SMap& s, int face);

struct Weights {
  std::map<int, Rational> lambda, mu, nu;
};
Weights family_weights(const PresentationFamily& fam);
// Weights read off the relators: lambda from the letters outside u-blocks,
// mu from the longest common subword of two distinct u-block occurrences,
// nu from the u-block length.
Weights measure_weights(const RelatorLayouts& rel);

// lambda + (3 + kappa + kappa') mu + 2 nu
Rational face_gamma(const SMap& s, const Weights& w, int face);
// lambda + (3 + 2 kappa) mu + 2 nu with kappa = 2k
Rational index_gamma(const Weights& w, int index, int k);

struct CheckResult {
  enum Status { holds, violated, hypothesis_failed };
  std::string name;
  Status status = holds;
  std::string witness;
};
const char* status_name(CheckResult::Status s);
std::string format_check(const CheckResult& r);

// One contour, Euler characteristic 1, contour passes no vertex twice.
bool is_simple_disc(const CombMap& m, const std::vector<int>& faces);
// Contour of the submap spanned by `faces`, as ambient darts.
std::vector<int> boundary_darts(const CombMap& m, const std::vector<int>& faces);

CheckResult check_Z2(const SMap& s, const std::vector<int>& phi);
CheckResult check_Y(const SMap& s, const std::vector<int>& gamma);
CheckResult check_D(const SMap& s, const std::vector<int>& sub, const Weights& w);

struct SelectedEstimate {
  CheckResult result;
  std::vector<std::vector<int>> A;
  long bound = 0;
  long e_bound = 0;
  std::vector<int> f;  // face assigned to each arc of A, -1 when the arc is in E
};
SelectedEstimate estimate_selected(const SMap& s, const std::vector<int>& C, const std::vector<int>& D);

struct ExceptionalEstimate {
  CheckResult result;
  std::map<int, int> A, B, delta;
  long euler = 0;
  std::vector<std::vector<int>> E;
};
ExceptionalEstimate estimate_exceptional(const SMap& s, const std::vector<int>& gamma);

CheckResult lemma46_check(const SMap& s, const Weights& w);

// Weakly strictly reduced, and every exceptional arc spans a whole u-block.
bool is_convenient(const Diagram& d, const SMap& s);

// Two relators with the layout of the generated family, small enough for
// exhaustive sweeps: a first-kind relator with k = 4, M = 10 and core b,
// and a second-kind relator with k = 5, M = 9 and tail a^-5.
RelatorLayouts toy_family();
RelatorTable relator_table(const RelatorLayouts& rel);

}  // namespace vkd
