#include "vkd/diagram.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vkd {

namespace {

std::size_t sz(int x) { return static_cast<std::size_t>(x); }

char label_char(int code) { return code == kOne ? '1' : Letter::from_code(code).to_char(); }

int parse_label(const std::string& s) {
  if (s == "1") return kOne;
  if (s.size() == 1)
    if (auto l = parse_letter(s[0])) return l->code;
  throw ParseError("bad edge label '" + s + "'");
}

std::int64_t mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

}  // namespace

bool Diagram::augmented() const {
  for (int c : edge_label)
    if (c == kOne) return true;
  for (FaceClass c : face_class)
    if (c != FaceClass::two) return true;
  return false;
}

std::vector<int> read_codes(const Diagram& d, const std::vector<int>& poly) {
  std::vector<int> out;
  out.reserve(poly.size());
  for (int x : poly) out.push_back(d.dart_label(x));
  return out;
}

GroupWord read_word(const Diagram& d, const std::vector<int>& poly) {
  GroupWord w;
  w.reserve(poly.size());
  for (int x : poly) {
    int c = d.dart_label(x);
    if (c >= 0 && c != kOne) w.push_back(Letter::from_code(c));
  }
  return w;
}

GroupWord contour_label(const Diagram& d, int contour) {
  return read_word(d, d.map.contours[sz(contour)].sides);
}

std::vector<int> face_reading(const Diagram& d, int face) {
  const auto& poly = d.map.faces[sz(face)];
  const auto& lab = d.face_label[sz(face)];
  const std::int64_t n = static_cast<std::int64_t>(poly.size());
  std::vector<int> out(poly.size());
  for (std::int64_t i = 0; i < n; ++i) {
    if (lab.orient > 0)
      out[static_cast<std::size_t>(i)] = poly[static_cast<std::size_t>(mod(lab.start + i, n))];
    else
      out[static_cast<std::size_t>(i)] = -poly[static_cast<std::size_t>(mod(lab.start + n - 1 - i, n))];
  }
  return out;
}

GroupWord face_word(const Diagram& d, int face) { return read_word(d, face_reading(d, face)); }

GroupWord face_word(const Diagram& d, int face, std::int64_t shift) {
  GroupWord w = face_word(d, face);
  if (w.empty()) return w;
  return rotate(w, static_cast<std::size_t>(mod(shift, static_cast<std::int64_t>(w.size()))));
}

namespace {

std::optional<std::string> check_shape(const Diagram& d) {
  if (auto err = validate(d.map)) return err;
  if (d.edge_label.size() != sz(d.map.num_edges)) return std::string("edge labels missing");
  if (d.face_label.size() != sz(d.map.num_faces()) || d.face_class.size() != sz(d.map.num_faces()))
    return std::string("face labels missing");
  for (int e = 0; e < d.map.num_edges; ++e) {
    int c = d.edge_label[sz(e)];
    if (c < 0 || c > kOne) return "edge " + std::to_string(e + 1) + " is unlabeled";
  }
  return std::nullopt;
}

std::optional<std::string> check_regular_face(const Diagram& d, int f, const RelatorTable& rel) {
  const auto& lab = d.face_label[sz(f)];
  const std::string where = "face " + std::to_string(f + 1);
  auto it = rel.find(lab.relator);
  if (it == rel.end()) return where + " names unknown relator " + std::to_string(lab.relator);
  const auto& poly = d.map.faces[sz(f)];
  if (lab.start < 0 || lab.start >= static_cast<std::int64_t>(poly.size())) return where + " start offset out of range";
  if (lab.orient != 1 && lab.orient != -1) return where + " orientation is not +/-";
  if (poly.size() != it->second.size()) return where + " length differs from its relator";
  for (int x : poly)
    if (d.dart_label(x) == kOne) return where + " is a 2-face on a 0-edge";
  if (face_word(d, f) != it->second) return where + " contour label differs from its relator";
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_diagram(const Diagram& d, const RelatorTable& rel) {
  if (auto err = check_shape(d)) return err;
  for (int e = 0; e < d.map.num_edges; ++e)
    if (d.edge_label[sz(e)] == kOne) return "edge " + std::to_string(e + 1) + " is a 0-edge";
  for (int f = 0; f < d.map.num_faces(); ++f) {
    if (d.face_class[sz(f)] != FaceClass::two) return "face " + std::to_string(f + 1) + " is auxiliary";
    if (auto err = check_regular_face(d, f, rel)) return err;
  }
  return std::nullopt;
}

std::optional<std::string> validate_augmented(const Diagram& d, const RelatorTable& rel) {
  if (auto err = check_shape(d)) return err;
  for (int f = 0; f < d.map.num_faces(); ++f) {
    const std::string where = "face " + std::to_string(f + 1);
    auto codes = read_codes(d, d.map.faces[sz(f)]);
    switch (d.face_class[sz(f)]) {
      case FaceClass::two:
        if (auto err = check_regular_face(d, f, rel)) return err;
        break;
      case FaceClass::zero:
        for (int c : codes)
          if (c != kOne) return where + " is a 0-face on a 1-edge";
        break;
      case FaceClass::one: {
        std::vector<int> letters;
        for (int c : codes)
          if (c != kOne) letters.push_back(c);
        if (letters.size() != 2 || letters[0] != invert_label(letters[1]))
          return where + " is a 1-face whose label is not x1^kx^-11^l";
        break;
      }
    }
  }
  return std::nullopt;
}

Diagram disc_diagram(const GroupWord& r, int relator) {
  Diagram d;
  const int n = static_cast<int>(r.size());
  d.map.num_edges = n;
  Contour c;
  std::vector<int> face;
  for (int i = 0; i < n; ++i) {
    c.sides.push_back(i + 1);
    d.edge_label.push_back(r[sz(i)].code);
  }
  for (int i = n; i >= 1; --i) face.push_back(-i);
  d.map.faces.push_back(face);
  d.map.contours.push_back(c);
  d.face_label.push_back(FaceLabel{relator, -1, 0});
  d.face_class.push_back(FaceClass::two);
  d.map.rebuild_vertices();
  return d;
}

Diagram tree_diagram(const GroupWord& w) {
  if (!free_reduce(w).empty()) throw std::invalid_argument("tree diagram needs a freely trivial word");
  Diagram d;
  Contour c;
  std::vector<int> stack;
  for (Letter l : w) {
    if (!stack.empty() && d.dart_label(stack.back()) == l.inv().code) {
      c.sides.push_back(-stack.back());
      stack.pop_back();
    } else {
      d.edge_label.push_back(l.code);
      ++d.map.num_edges;
      c.sides.push_back(d.map.num_edges);
      stack.push_back(d.map.num_edges);
    }
  }
  d.map.contours.push_back(c);
  d.map.rebuild_vertices();
  return d;
}

Diagram trivial_diagram() {
  Diagram d;
  d.map.contours.push_back(Contour{});
  d.map.rebuild_vertices();
  return d;
}

// ---------------------------------------------------------------- file format

namespace {

std::string join_darts(const std::vector<int>& darts) {
  std::string s;
  for (std::size_t i = 0; i < darts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(darts[i]);
  }
  return s;
}

std::vector<int> split_darts(const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size() || v == 0) throw ParseError("bad side '" + tok + "'");
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw ParseError("bad side '" + tok + "'");
    }
  }
  return out;
}

long parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw ParseError(std::string("bad ") + what + " '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(std::string("bad ") + what + " '" + s + "'");
  }
}

}  // namespace

std::string write_diagram(const Diagram& d) {
  std::ostringstream out;
  out << "diagram v1\n";
  for (int v = 0; v < d.map.num_vertices; ++v) out << "vertex " << v + 1 << "\n";
  for (int e = 0; e < d.map.num_edges; ++e) {
    out << "edge " << e + 1 << ' ' << d.map.end_vertex[sz(2 * e)] + 1 << ' ' << d.map.end_vertex[sz(2 * e + 1)] + 1;
    if (d.edge_label[sz(e)] >= 0) out << " label=" << label_char(d.edge_label[sz(e)]);
    out << "\n";
  }
  for (int f = 0; f < d.map.num_faces(); ++f) {
    out << "face " << f + 1;
    const auto& lab = d.face_label[sz(f)];
    if (d.face_class[sz(f)] == FaceClass::two) {
      if (lab.relator > 0)
        out << " relator=" << lab.relator << " orient=" << (lab.orient > 0 ? '+' : '-') << " start=" << lab.start;
    } else {
      out << " class=" << static_cast<int>(d.face_class[sz(f)]);
    }
    out << " sides=" << join_darts(d.map.faces[sz(f)]) << "\n";
  }
  for (int k = 0; k < d.map.num_contours(); ++k) {
    const auto& c = d.map.contours[sz(k)];
    out << "contour " << k + 1;
    if (c.sides.empty()) out << " vertex=" << c.vertex + 1;
    out << " sides=" << join_darts(c.sides) << "\n";
  }
  return out.str();
}

Diagram read_diagram(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "diagram v1") throw ParseError("missing 'diagram v1' header");
  Diagram d;
  int vertices = 0;
  std::vector<std::pair<int, int>> ends;
  std::vector<int> contour_vertex;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind, id;
    ls >> kind >> id;
    const std::string at = " (line " + std::to_string(lineno) + ")";
    std::vector<std::string> rest;
    for (std::string t; ls >> t;) rest.push_back(t);
    std::map<std::string, std::string> kv;
    std::vector<std::string> bare;
    for (const auto& t : rest) {
      auto eq = t.find('=');
      if (eq == std::string::npos)
        bare.push_back(t);
      else
        kv[t.substr(0, eq)] = t.substr(eq + 1);
    }
    try {
      if (kind == "vertex") {
        if (parse_int(id, "vertex id") != vertices + 1) throw ParseError("vertex ids must be 1,2,...");
        ++vertices;
      } else if (kind == "edge") {
        if (parse_int(id, "edge id") != d.map.num_edges + 1) throw ParseError("edge ids must be 1,2,...");
        if (bare.size() != 2) throw ParseError("edge needs two endpoints");
        int a = static_cast<int>(parse_int(bare[0], "vertex")), b = static_cast<int>(parse_int(bare[1], "vertex"));
        if (a < 1 || b < 1 || a > vertices || b > vertices) throw ParseError("edge endpoint is not a declared vertex");
        ends.emplace_back(a - 1, b - 1);
        d.edge_label.push_back(kv.count("label") ? parse_label(kv["label"]) : kNoLabel);
        ++d.map.num_edges;
      } else if (kind == "face") {
        if (parse_int(id, "face id") != d.map.num_faces() + 1) throw ParseError("face ids must be 1,2,...");
        if (!kv.count("sides")) throw ParseError("face without sides");
        FaceLabel lab;
        FaceClass cls = FaceClass::two;
        if (kv.count("class")) {
          long c = parse_int(kv["class"], "face class");
          if (c < 0 || c > 2) throw ParseError("face class must be 0, 1 or 2");
          cls = static_cast<FaceClass>(c);
        }
        if (kv.count("relator")) {
          lab.relator = static_cast<int>(parse_int(kv["relator"], "relator"));
          if (lab.relator < 1) throw ParseError("relator index must be positive");
          std::string o = kv.count("orient") ? kv["orient"] : "+";
          if (o != "+" && o != "-") throw ParseError("orient must be + or -");
          lab.orient = o == "+" ? 1 : -1;
          lab.start = kv.count("start") ? parse_int(kv["start"], "start") : 0;
        }
        d.map.faces.push_back(split_darts(kv["sides"]));
        d.face_label.push_back(lab);
        d.face_class.push_back(cls);
      } else if (kind == "contour") {
        if (parse_int(id, "contour id") != d.map.num_contours() + 1) throw ParseError("contour ids must be 1,2,...");
        Contour c;
        c.sides = split_darts(kv.count("sides") ? kv["sides"] : "");
        int v = -1;
        if (kv.count("vertex")) {
          v = static_cast<int>(parse_int(kv["vertex"], "vertex")) - 1;
          if (v < 0 || v >= vertices) throw ParseError("contour vertex is not declared");
        }
        if (c.sides.empty() && v < 0) throw ParseError("trivial contour needs vertex=");
        contour_vertex.push_back(c.sides.empty() ? v : -1);
        d.map.contours.push_back(c);
      } else {
        throw ParseError("unknown record '" + kind + "'");
      }
    } catch (const ParseError& e) {
      throw ParseError(e.what() + at);
    }
  }
  for (int p = 0; p < d.map.num_polygons(); ++p)
    for (int x : d.map.polygon(p))
      if (dart_edge(x) >= d.map.num_edges) throw ParseError("side " + std::to_string(x) + " names no edge");
  d.map.rebuild_vertices();
  if (auto err = validate(d.map)) throw ParseError(*err);
  // the declared endpoints must be the vertices the gluing produces
  std::vector<int> file_of(sz(d.map.num_vertices), -1), derived_of(sz(vertices), -1);
  auto bind = [&](int derived, int file) {
    if (file_of[sz(derived)] < 0 && derived_of[sz(file)] < 0) {
      file_of[sz(derived)] = file;
      derived_of[sz(file)] = derived;
    }
    if (file_of[sz(derived)] != file || derived_of[sz(file)] != derived)
      throw ParseError("vertex " + std::to_string(file + 1) + " does not match the gluing of the faces");
  };
  for (int e = 0; e < d.map.num_edges; ++e) {
    bind(d.map.end_vertex[sz(2 * e)], ends[sz(e)].first);
    bind(d.map.end_vertex[sz(2 * e + 1)], ends[sz(e)].second);
  }
  for (int k = 0; k < d.map.num_contours(); ++k)
    if (d.map.contours[sz(k)].sides.empty()) bind(d.map.contours[sz(k)].vertex, contour_vertex[sz(k)]);
  for (int v = 0; v < vertices; ++v)
    if (derived_of[sz(v)] < 0) throw ParseError("vertex " + std::to_string(v + 1) + " lies on no edge or contour");
  return d;
}

Diagram restrict_to(const Diagram& d, const SubMap& s) {
  Diagram out;
  out.map = s.map;
  for (int e : s.edges) out.edge_label.push_back(d.edge_label[sz(e)]);
  for (int f : s.faces) {
    out.face_label.push_back(d.face_label[sz(f)]);
    out.face_class.push_back(d.face_class[sz(f)]);
  }
  return out;
}

Diagram drop_closed_faces(const Diagram& d, const std::vector<int>& faces) {
  std::vector<char> drop(sz(d.map.num_faces()), 0);
  for (int f : faces) drop[sz(f)] = 1;
  Diagram out;
  std::vector<int> new_edge(sz(d.map.num_edges), -1);
  std::vector<char> used(sz(d.map.num_edges), 0);
  for (int p = 0; p < d.map.num_polygons(); ++p) {
    if (p < d.map.num_faces() && drop[sz(p)]) continue;
    for (int x : d.map.polygon(p)) used[sz(dart_edge(x))] = 1;
  }
  for (int e = 0; e < d.map.num_edges; ++e)
    if (used[sz(e)]) {
      new_edge[sz(e)] = out.map.num_edges++;
      out.edge_label.push_back(d.edge_label[sz(e)]);
    }
  auto remap = [&](const std::vector<int>& poly) {
    std::vector<int> r;
    for (int x : poly) {
      int ne = new_edge[sz(dart_edge(x))];
      if (ne < 0) throw std::invalid_argument("dropped faces do not form closed components");
      r.push_back(make_dart(ne, x > 0 ? 1 : -1));
    }
    return r;
  };
  for (int f = 0; f < d.map.num_faces(); ++f) {
    if (drop[sz(f)]) continue;
    out.map.faces.push_back(remap(d.map.faces[sz(f)]));
    out.face_label.push_back(d.face_label[sz(f)]);
    out.face_class.push_back(d.face_class[sz(f)]);
  }
  for (const auto& c : d.map.contours) out.map.contours.push_back(Contour{remap(c.sides), -1});
  out.map.rebuild_vertices();
  return out;
}

// ---------------------------------------------------------------- diamond move

const char* move_kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::proper:
      return "proper";
    case MoveKind::untwisting:
      return "untwisting";
    case MoveKind::disconnecting:
      return "disconnecting";
  }
  return "?";
}

std::optional<std::string> diamond_precondition(const Diagram& d, int d1, int d2) {
  auto in_range = [&](int x) { return x != 0 && dart_edge(x) < d.map.num_edges; };
  if (!in_range(d1) || !in_range(d2)) return std::string("edge out of range");
  if (d1 == d2) return std::string("e1 and e2 are the same oriented edge");
  if (dart_edge(d1) == dart_edge(d2)) return std::string("e1 and e2 lie on the same edge");
  if (d.map.head(d1) != d.map.head(d2)) return std::string("e1 and e2 have no common terminal vertex");
  if (d.dart_label(d1) != d.dart_label(d2)) return std::string("e1 and e2 carry different labels");
  return std::nullopt;
}

MoveResult apply_diamond(const Diagram& d, int d1, int d2) {
  if (auto err = diamond_precondition(d, d1, d2)) throw std::invalid_argument(*err);
  const CombMap& m = d.map;
  auto occ = occurrences(m);
  const int e1 = dart_edge(d1);
  const int h1 = head_end(d1), h2 = head_end(d2);
  auto other = [&](const Occurrence& o) {
    const auto& list = occ[sz(dart_edge(m.polygon(o.poly)[sz(o.pos)]))];
    return list[0] == o ? list[1] : list[0];
  };
  // Cross the corner next to slot (o, x) of the vertex link.
  auto cross = [&](const Occurrence& o, int x) -> std::pair<Occurrence, int> {
    const auto& poly = m.polygon(o.poly);
    const int n = static_cast<int>(poly.size());
    if (x == head_end(poly[sz(o.pos)])) {
      int j = (o.pos + 1) % n;
      return {Occurrence{o.poly, j}, tail_end(poly[sz(j)])};
    }
    int j = (o.pos + n - 1) % n;
    return {Occurrence{o.poly, j}, head_end(poly[sz(j)])};
  };
  const Occurrence r1 = occ[sz(e1)][0];
  const Occurrence l1 = other(r1);
  Occurrence cur = r1;
  int x = h1;
  Occurrence l2{};
  for (;;) {
    auto [o, y] = cross(cur, x);
    if (y == h2) {
      l2 = o;
      break;
    }
    if (y == h1) throw std::logic_error("diamond move: terminal vertex link is broken");
    cur = other(o);
    x = y;
  }
  MoveResult res;
  res.diagram = d;
  CombMap& nm = res.diagram.map;
  int& a = nm.polygon(l1.poly)[sz(l1.pos)];
  int& b = nm.polygon(l2.poly)[sz(l2.pos)];
  int na = a == d1 ? d2 : -d2;
  int nb = b == d2 ? d1 : -d1;
  a = na;
  b = nb;
  nm.rebuild_vertices();
  res.vertex_delta = nm.num_vertices - m.num_vertices;
  if (res.vertex_delta < 0 || res.vertex_delta > 2)
    throw std::logic_error("diamond move changed the vertex count by " + std::to_string(res.vertex_delta));
  res.kind = static_cast<MoveKind>(res.vertex_delta);
  return res;
}

std::vector<std::pair<int, int>> diamond_candidates(const Diagram& d) {
  // group darts by (terminal vertex, label)
  std::map<std::pair<int, int>, std::vector<int>> groups;
  for (int e = 0; e < d.map.num_edges; ++e)
    for (int s : {1, -1}) {
      int x = make_dart(e, s);
      groups[{d.map.head(x), d.dart_label(x)}].push_back(x);
    }
  std::vector<std::pair<int, int>> out;
  for (auto& [key, darts] : groups) {
    std::sort(darts.begin(), darts.end());
    for (std::size_t i = 0; i < darts.size(); ++i)
      for (std::size_t j = i + 1; j < darts.size(); ++j)
        if (dart_edge(darts[i]) != dart_edge(darts[j])) out.emplace_back(darts[i], darts[j]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- canonical form

namespace {

// Faces read from their label start. For a periodic relator the start is
// only defined up to the period, so the rotation that puts the smallest
// already-numbered edges first is used; `shift` picks it when nothing is
// numbered yet.
std::vector<int> canonical_poly(const Diagram& d, int p, const std::vector<int>& edge_id, std::size_t shift) {
  if (p >= d.map.num_faces() || d.face_label[sz(p)].relator <= 0) return d.map.polygon(p);
  std::vector<int> r = face_reading(d, p);
  const std::size_t n = r.size();
  const std::size_t per = primitive_period(read_word(d, r));
  if (per == 0 || per >= n) return r;
  auto key = [&](std::size_t k) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      int id = edge_id[sz(dart_edge(r[(k + i) % n]))];
      v[i] = id == 0 ? std::numeric_limits<int>::max() : std::abs(id);
    }
    return v;
  };
  std::size_t best = 0;
  auto best_key = key(0);
  bool any_seen = false;
  for (int x : r) any_seen = any_seen || edge_id[sz(dart_edge(x))] != 0;
  if (!any_seen) {
    best = (shift % (n / per)) * per;
  } else {
    for (std::size_t k = per; k < n; k += per) {
      auto kk = key(k);
      if (kk < best_key) best_key = kk, best = k;
    }
  }
  std::rotate(r.begin(), r.begin() + static_cast<long>(best), r.end());
  return r;
}

std::string encode_from(const Diagram& d, const std::vector<std::vector<Occurrence>>& occ, int start,
                        std::size_t shift = 0) {
  const CombMap& m = d.map;
  std::vector<int> edge_id(sz(m.num_edges), 0);  // signed 1-based once seen
  std::vector<int> poly_id(sz(m.num_polygons()), -1);
  std::vector<int> order{start};
  poly_id[sz(start)] = 0;
  std::string out;
  int next_edge = 0;
  for (std::size_t qi = 0; qi < order.size(); ++qi) {
    int p = order[qi];
    if (p < m.num_faces()) {
      const auto& lab = d.face_label[sz(p)];
      out += "F" + std::to_string(static_cast<int>(d.face_class[sz(p)])) + "." + std::to_string(lab.relator);
    } else {
      out += "C" + std::to_string(p - m.num_faces() + 1);
    }
    out += ':';
    for (int x : canonical_poly(d, p, edge_id, shift)) {
      int e = dart_edge(x);
      if (edge_id[sz(e)] == 0) {
        ++next_edge;
        edge_id[sz(e)] = x > 0 ? next_edge : -next_edge;
      }
      int nd = x > 0 ? edge_id[sz(e)] : -edge_id[sz(e)];
      out += std::to_string(nd);
      out += label_char(d.dart_label(x));
      out += ',';
      for (const auto& o : occ[sz(e)])
        if (poly_id[sz(o.poly)] < 0) {
          poly_id[sz(o.poly)] = static_cast<int>(order.size());
          order.push_back(o.poly);
        }
    }
    out += ';';
  }
  return out;
}

}  // namespace

std::string canonical_form(const Diagram& d) {
  std::vector<std::string> parts;
  auto comps = components(d.map);
  for (const auto& c : comps) {
    Diagram sub = restrict_to(d, c);
    if (sub.map.num_edges == 0) {
      parts.push_back("T" + std::to_string(c.contours.at(0) + 1));
      continue;
    }
    auto occ = occurrences(sub.map);
    std::string best;
    if (sub.map.num_contours() > 0) {
      // contour numbers are global, the encoding must name them
      std::string enc = encode_from(sub, occ, sub.map.num_faces());
      // rename local contour tags to global ones
      std::string renamed;
      for (std::size_t i = 0; i < enc.size(); ++i) {
        if (enc[i] == 'C' && (i == 0 || enc[i - 1] == ';')) {
          std::size_t j = i + 1;
          while (enc[j] != ':') ++j;
          int local = std::stoi(enc.substr(i + 1, j - i - 1)) - 1;
          renamed += "C" + std::to_string(c.contours[sz(local)] + 1);
          i = j - 1;
        } else {
          renamed += enc[i];
        }
      }
      best = renamed;
    } else {
      for (int f = 0; f < sub.map.num_faces(); ++f) {
        const std::size_t n = sub.map.faces[sz(f)].size();
        std::size_t per = n;
        if (sub.face_label[sz(f)].relator > 0) per = primitive_period(face_word(sub, f));
        for (std::size_t k = 0; per > 0 && k < n / per; ++k) {
          std::string enc = encode_from(sub, occ, f, k);
          if (best.empty() || enc < best) best = enc;
        }
      }
    }
    parts.push_back(best);
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += p + "|";
  return out;
}

// ---------------------------------------------------------------- regularization

Diagram regularize(const Diagram& d) {
  const CombMap& m = d.map;
  const int E = m.num_edges;
  // union-find with parity: +e equals parity * (+parent)
  std::vector<int> parent(sz(E)), parity(sz(E), 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::pair<int, int>(int)> find = [&](int e) -> std::pair<int, int> {
    if (parent[sz(e)] == e) return {e, 1};
    auto [r, s] = find(parent[sz(e)]);
    parent[sz(e)] = r;
    parity[sz(e)] *= s;
    return {r, parity[sz(e)]};
  };
  for (int f = 0; f < m.num_faces(); ++f) {
    if (d.face_class[sz(f)] != FaceClass::one) continue;
    std::vector<int> ones;
    for (int x : m.faces[sz(f)])
      if (d.dart_label(x) != kOne) ones.push_back(x);
    if (ones.size() != 2) throw std::invalid_argument("1-face without exactly two 1-edges");
    // the band identifies dart p with the inverse of dart q
    int p = ones[0], q = ones[1];
    auto [rp, sp] = find(dart_edge(p));
    auto [rq, sq] = find(dart_edge(q));
    int want = -(p > 0 ? 1 : -1) * (q > 0 ? 1 : -1);  // +edge(q) = want * +edge(p)
    if (rp == rq) continue;
    parent[sz(rq)] = rp;
    parity[sz(rq)] = want * sp * sq;
  }
  Diagram out;
  // surviving edges keep their relative order
  std::vector<int> new_id(sz(E), -1);
  for (int p = 0; p < m.num_polygons(); ++p) {
    if (p < m.num_faces() && d.face_class[sz(p)] != FaceClass::two) continue;
    for (int x : m.polygon(p))
      if (d.dart_label(x) != kOne) new_id[sz(find(dart_edge(x)).first)] = 0;
  }
  for (int e = 0; e < E; ++e)
    if (new_id[sz(e)] == 0) {
      new_id[sz(e)] = out.map.num_edges++;
      out.edge_label.push_back(d.edge_label[sz(e)]);
    }
  auto remap = [&](const std::vector<int>& poly) {
    std::vector<int> r;
    for (int x : poly) {
      if (d.dart_label(x) == kOne) continue;
      auto [root, s] = find(dart_edge(x));
      r.push_back(make_dart(new_id[sz(root)], (x > 0 ? 1 : -1) * s));
    }
    return r;
  };
  for (int f = 0; f < m.num_faces(); ++f) {
    if (d.face_class[sz(f)] != FaceClass::two) continue;
    out.map.faces.push_back(remap(m.faces[sz(f)]));
    out.face_label.push_back(d.face_label[sz(f)]);
    out.face_class.push_back(FaceClass::two);
  }
  for (const auto& c : m.contours) out.map.contours.push_back(Contour{remap(c.sides), -1});
  out.map.rebuild_vertices();
  return out;
}

// ---------------------------------------------------------------- reducedness

std::optional<CancelWitness> cancelable_pair(const Diagram& d) {
  const CombMap& m = d.map;
  auto occ = occurrences(m);
  // position of each occurrence in the reading of its face
  auto reading_pos = [&](const Occurrence& o, int& dart) {
    const auto& poly = m.faces[sz(o.poly)];
    const auto& lab = d.face_label[sz(o.poly)];
    const std::int64_t n = static_cast<std::int64_t>(poly.size());
    if (lab.orient > 0) {
      dart = poly[sz(o.pos)];
      return mod(o.pos - lab.start, n);
    }
    dart = -poly[sz(o.pos)];
    return mod(lab.start + n - 1 - o.pos, n);
  };
  for (int e = 0; e < m.num_edges; ++e) {
    const auto& o = occ[sz(e)];
    if (o.size() != 2 || o[0].poly == o[1].poly) continue;
    if (o[0].poly >= m.num_faces() || o[1].poly >= m.num_faces()) continue;
    const auto& l0 = d.face_label[sz(o[0].poly)];
    const auto& l1 = d.face_label[sz(o[1].poly)];
    if (l0.relator <= 0 || l0.relator != l1.relator) continue;
    int x0 = 0, x1 = 0;
    auto p0 = reading_pos(o[0], x0);
    auto p1 = reading_pos(o[1], x1);
    if (p0 == p1 && x0 == x1) return CancelWitness{std::min(o[0].poly, o[1].poly), std::max(o[0].poly, o[1].poly), e};
  }
  return std::nullopt;
}

namespace {

struct Search {
  const ReduceOptions& opt;
  bool truncated = false;

  // A sequence of at most `depth` moves, all proper but the last, that
  // raises the vertex count.
  std::optional<std::pair<Diagram, int>> find(const Diagram& d, int depth) {
    auto cands = diamond_candidates(d);
    if (static_cast<int>(cands.size()) > opt.breadth) {
      truncated = true;
      cands.resize(sz(opt.breadth));
    }
    std::vector<Diagram> proper;
    for (auto [x, y] : cands) {
      auto r = apply_diamond(d, x, y);
      if (r.vertex_delta > 0) return std::make_pair(std::move(r.diagram), 1);
      if (depth > 1) proper.push_back(std::move(r.diagram));
    }
    for (const auto& p : proper)
      if (auto deeper = find(p, depth - 1)) return std::make_pair(std::move(deeper->first), deeper->second + 1);
    return std::nullopt;
  }
};

}  // namespace

ReduceResult reduce(const Diagram& d, const ReduceOptions& opt) {
  ReduceResult res;
  res.diagram = d;
  Search s{opt};
  while (auto step = s.find(res.diagram, opt.depth)) {
    res.diagram = std::move(step->first);
    res.moves += step->second;
  }
  res.clean = !s.truncated;
  std::vector<int> drop;
  for (const auto& c : components(res.diagram.map)) {
    if (c.map.num_contours() > 0 || c.map.num_faces() != 2) continue;
    if (classify_closed(c.map).name != "sphere") continue;
    drop.insert(drop.end(), c.faces.begin(), c.faces.end());
    ++res.stripped;
  }
  if (!drop.empty()) res.diagram = drop_closed_faces(res.diagram, drop);
  return res;
}

GenusCertificate genus_certificates(const Diagram& d) {
  if (d.map.num_contours() != 1) throw std::invalid_argument("genus certificates need exactly one contour");
  if (components(d.map).size() != 1) throw std::invalid_argument("genus certificates need a connected diagram");
  GenusCertificate g;
  if (d.map.contours[0].sides.empty()) {
    g.euler = 2;
    g.cl_bound = 0;
    g.sql_bound = 0;
    return g;
  }
  auto cls = classify_closed(closure(d.map));
  g.orientable = cls.orientable;
  g.euler = cls.euler;
  if (cls.orientable) {
    g.cl_bound = cls.genus;
    g.sql_bound = cls.genus == 0 ? 0 : 2 * cls.genus + 1;
  } else {
    g.sql_bound = cls.genus;
  }
  return g;
}

}  // namespace vkd
