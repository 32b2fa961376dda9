#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vkd/surface.hpp"
#include "vkd/words.hpp"

namespace vkd {

// Edge label codes: 0..3 are Letter codes, kOne is the symbol 1 of a 0-edge.
inline constexpr int kNoLabel = -1;
inline constexpr int kOne = 4;

inline int invert_label(int code) { return code == kOne || code < 0 ? code : code ^ 2; }

enum class FaceClass { zero = 0, one = 1, two = 2 };

struct FaceLabel {
  int relator = 0;  // 0 for auxiliary faces
  int orient = 1;   // -1: the polygon read from start spells the relator inverse
  std::int64_t start = 0;
  friend bool operator==(const FaceLabel&, const FaceLabel&) = default;
};

using RelatorTable = std::map<int, GroupWord>;

struct Diagram {
  CombMap map;
  std::vector<int> edge_label;  // label of the positive dart of each edge
  std::vector<FaceLabel> face_label;
  std::vector<FaceClass> face_class;

  int dart_label(int d) const {
    int c = edge_label[static_cast<std::size_t>(dart_edge(d))];
    return d > 0 ? c : invert_label(c);
  }
  bool augmented() const;
};

// Label codes along a polygon, in polygon order.
std::vector<int> read_codes(const Diagram& d, const std::vector<int>& poly);
// Word along a polygon with the 1 symbols cancelled.
GroupWord read_word(const Diagram& d, const std::vector<int>& poly);

GroupWord contour_label(const Diagram& d, int contour);
// Word of a face read from its start offset, in the direction its label says.
GroupWord face_word(const Diagram& d, int face);
// Same, offset by `shift` further positions.
GroupWord face_word(const Diagram& d, int face, std::int64_t shift);

// Face polygon rotated and reoriented so that it spells its relator.
std::vector<int> face_reading(const Diagram& d, int face);

std::optional<std::string> validate_diagram(const Diagram& d, const RelatorTable& rel);

// Disc with one face whose contour reads r.
Diagram disc_diagram(const GroupWord& r, int relator);
// Zero-face diagram whose single contour walks around a tree; the tree is
// given by the freely trivial word w and the result has contour label w.
Diagram tree_diagram(const GroupWord& w);
// Closed-up diagrams with zero faces per component are not allowed; this
// keeps one trivial component.
Diagram trivial_diagram();

std::string write_diagram(const Diagram& d);
Diagram read_diagram(const std::string& text);

// Labels carried over to a submap.
Diagram restrict_to(const Diagram& d, const SubMap& s);

// Drops faces that form closed components; contours keep their numbers.
Diagram drop_closed_faces(const Diagram& d, const std::vector<int>& faces);

enum class MoveKind { proper, untwisting, disconnecting };
const char* move_kind_name(MoveKind k);

struct MoveResult {
  Diagram diagram;
  MoveKind kind = MoveKind::proper;
  int vertex_delta = 0;
};

// Darts are signed edge ids. Throws std::invalid_argument on a violated
// precondition.
MoveResult apply_diamond(const Diagram& d, int d1, int d2);
std::optional<std::string> diamond_precondition(const Diagram& d, int d1, int d2);
// All (d1, d2) with a common terminal vertex and equal labels, d1 < d2.
std::vector<std::pair<int, int>> diamond_candidates(const Diagram& d);

// Labeled-isomorphism invariant string; equal strings iff isomorphic.
std::string canonical_form(const Diagram& d);

Diagram regularize(const Diagram& d);
std::optional<std::string> validate_augmented(const Diagram& d, const RelatorTable& rel);

struct CancelWitness {
  int face1 = -1;
  int face2 = -1;
  int edge = -1;
};
std::optional<CancelWitness> cancelable_pair(const Diagram& d);
inline bool is_weakly_strictly_reduced(const Diagram& d) { return !cancelable_pair(d); }

struct ReduceOptions {
  int depth = 3;
  int breadth = 64;
};
struct ReduceResult {
  Diagram diagram;
  bool clean = true;  // false: the search was cut by the breadth limit
  int moves = 0;
  int stripped = 0;
};
ReduceResult reduce(const Diagram& d, const ReduceOptions& opt = {});

struct GenusCertificate {
  bool orientable = true;
  long euler = 2;
  std::optional<int> cl_bound;
  std::optional<int> sql_bound;
};
GenusCertificate genus_certificates(const Diagram& d);

}  // namespace vkd
