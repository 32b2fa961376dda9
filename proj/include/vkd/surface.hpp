#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vkd {

// Oriented edges ("darts") are signed 1-based edge ids: +(e+1) runs from the
// tail of edge e to its head, -(e+1) the other way.
inline int dart_edge(int d) { return (d > 0 ? d : -d) - 1; }
inline int make_dart(int e, int sign) { return sign > 0 ? e + 1 : -(e + 1); }

struct Contour {
  std::vector<int> sides;  // empty for a trivial contour
  int vertex = -1;         // derived; meaningful for trivial contours
};

// A map given by the boundary polygons of its faces and the contours,
// glued along edges. Each edge occurs exactly twice among all polygons.
// Vertices are not stored: they are the cycles of the vertex links, read off
// the corners of the polygons.
struct CombMap {
  int num_edges = 0;
  std::vector<std::vector<int>> faces;
  std::vector<Contour> contours;

  // derived by rebuild_vertices()
  int num_vertices = 0;
  std::vector<int> end_vertex;  // size 2*num_edges; end 2e is the tail of e

  void rebuild_vertices();

  int tail(int d) const;
  int head(int d) const;
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_contours() const { return static_cast<int>(contours.size()); }

  // Faces first, then contours.
  int num_polygons() const { return num_faces() + num_contours(); }
  const std::vector<int>& polygon(int p) const {
    return p < num_faces() ? faces[static_cast<std::size_t>(p)]
                           : contours[static_cast<std::size_t>(p - num_faces())].sides;
  }
  std::vector<int>& polygon(int p) {
    return p < num_faces() ? faces[static_cast<std::size_t>(p)]
                           : contours[static_cast<std::size_t>(p - num_faces())].sides;
  }
};

inline int tail_end(int d) { return 2 * dart_edge(d) + (d > 0 ? 0 : 1); }
inline int head_end(int d) { return 2 * dart_edge(d) + (d > 0 ? 1 : 0); }

struct Occurrence {
  int poly = -1;
  int pos = -1;
  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

// occ[e] lists the (at most two in a valid map) places where edge e is used.
std::vector<std::vector<Occurrence>> occurrences(const CombMap& m);

// First violated invariant, or nullopt.
std::optional<std::string> validate(const CombMap& m);

long euler_characteristic(const CombMap& m);

CombMap closure(const CombMap& m);

struct OrientResult {
  bool orientable = true;
  std::vector<int> polygon_sign;  // +1 / -1 per polygon when orientable
  std::vector<int> odd_cycle;     // edges of a cycle forcing a twist
};
OrientResult orient(const CombMap& m);
inline bool is_orientable(const CombMap& m) { return orient(m).orientable; }

struct SurfaceClass {
  bool orientable = true;
  long euler = 2;
  int genus = 0;  // handles if orientable, cross-caps otherwise
  std::string name;
};
// Requires a closed connected map.
SurfaceClass classify_closed(const CombMap& m);

struct SubMap {
  CombMap map;
  std::vector<int> faces;     // ambient face of each face
  std::vector<int> edges;     // ambient edge of each edge
  std::vector<int> contours;  // ambient contour of each contour, -1 if new
};

std::vector<SubMap> components(const CombMap& m);

// Submap spanned by a set of faces plus extra edges and vertices; its
// contours are the boundary walks of the union.
SubMap submap(const CombMap& m, const std::vector<int>& faces,
              const std::vector<int>& extra_edges = {},
              const std::vector<int>& extra_vertices = {});

}  // namespace vkd
