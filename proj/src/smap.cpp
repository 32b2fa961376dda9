#include "vkd/smap.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "vkd/matching.hpp"

namespace vkd {

namespace {

std::size_t sz(long i) { return static_cast<std::size_t>(i); }

struct FacePos {
  int face = -1;
  int pos = -1;
};

// Face occurrences of every edge, at most two per edge; contour sides are not
// listed.
struct FaceOcc {
  std::vector<FacePos> slot;  // 2 per edge
  std::vector<unsigned char> count;
  std::size_t size(int e) const { return count[sz(e)]; }
  const FacePos& at(int e, int i) const { return slot[sz(2 * e + i)]; }
};

FaceOcc face_occurrences(const SMap& s) {
  FaceOcc occ;
  occ.slot.assign(sz(2 * s.map.num_edges), FacePos{});
  occ.count.assign(sz(s.map.num_edges), 0);
  for (int f = 0; f < static_cast<int>(s.face.size()); ++f) {
    const auto& r = s.face[sz(f)].reading;
    for (int p = 0; p < static_cast<int>(r.size()); ++p) {
      int e = dart_edge(r[sz(p)]);
      auto& c = occ.count[sz(e)];
      if (c < 2) occ.slot[sz(2 * e + c)] = FacePos{f, p};
      ++c;
    }
  }
  return occ;
}

bool is_connected(const CombMap& m);

std::vector<int> vertex_degrees(const CombMap& m) {
  std::vector<int> deg(sz(m.num_vertices), 0);
  for (int v : m.end_vertex) ++deg[sz(v)];
  return deg;
}

// Positions p and q of one face are neighbours joined by a selected path.
bool joined(const FaceSel& fs, int p, int q) {
  const int n = static_cast<int>(fs.reading.size());
  if ((p + 1) % n == q) return fs.link[sz(p)];
  if ((q + 1) % n == p) return fs.link[sz(q)];
  return false;
}

bool all_selected(const FaceSel& fs) {
  const std::size_t n = fs.reading.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (!fs.sel[p]) return false;
    if (fs.reading[(p + 1) % n] != -fs.reading[p] && !fs.link[p]) return false;
  }
  return n > 0;
}

Rational get_weight(const std::map<int, Rational>& m, int index, const char* what) {
  auto it = m.find(index);
  if (it == m.end()) throw std::invalid_argument(std::string("no ") + what + " for index " + std::to_string(index));
  return it->second;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

CheckResult make_result(const std::string& name, CheckResult::Status st, std::string witness = {}) {
  return CheckResult{name, st, std::move(witness)};
}

std::vector<char> face_flags(const SMap& s, const std::vector<int>& faces) {
  std::vector<char> in(s.face.size(), 0);
  for (int f : faces) {
    if (f < 0 || f >= static_cast<int>(s.face.size())) throw std::invalid_argument("face out of range");
    in[sz(f)] = 1;
  }
  return in;
}

// Number of occurrences of each ambient edge among the given faces.
std::vector<int> edge_counts(const SMap& s, const std::vector<int>& faces) {
  std::vector<int> c(sz(s.map.num_edges), 0);
  for (int f : faces)
    for (int d : s.map.faces[sz(f)]) ++c[sz(dart_edge(d))];
  return c;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(sz(n)) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[sz(x)] != x) x = p[sz(x)] = p[sz(p[sz(x)])];
    return x;
  }
  void unite(int a, int b) { p[sz(find(a))] = find(b); }
};

}  // namespace

RelatorLayouts layouts_of(const PresentationFamily& fam) {
  RelatorLayouts out;
  for (int n = 1; n <= fam.size(); ++n) out[n] = fam.relator(n);
  return out;
}

RelatorTable relator_table(const RelatorLayouts& rel) {
  RelatorTable t;
  for (const auto& [n, r] : rel) t[n] = r.word;
  return t;
}

RelatorLayouts toy_family() {
  RelatorLayouts out;
  const GroupWord v = parse_word("ab");
  ConditionSpec c1;
  c1.n = 1;
  c1.kind = RelatorKind::first;
  c1.w = parse_word("b");
  c1.x = 0;
  out[1] = build_relator(make_params(1, 10), c1, v);
  ConditionSpec c2;
  c2.n = 2;
  c2.kind = RelatorKind::second;
  c2.w = parse_word("a");
  c2.m = 1;
  out[2] = build_relator(make_params(2, 9), c2, v);
  return out;
}

std::vector<Arc> arcs(const CombMap& m) {
  auto deg = vertex_degrees(m);
  // the two edge ends at each vertex of degree 2
  std::vector<std::pair<int, int>> ends_at(sz(m.num_vertices), {-1, -1});
  for (int x = 0; x < 2 * m.num_edges; ++x) {
    auto& slot = ends_at[sz(m.end_vertex[sz(x)])];
    (slot.first < 0 ? slot.first : slot.second) = x;
  }
  std::vector<int> face_uses(sz(m.num_edges), 0);
  for (const auto& f : m.faces)
    for (int d : f) ++face_uses[sz(dart_edge(d))];
  std::vector<char> used(sz(m.num_edges), 0);
  std::vector<Arc> out;
  auto dart_from_end = [](int x) { return make_dart(x / 2, x % 2 == 0 ? 1 : -1); };
  auto walk = [&](int d0) {
    Arc a;
    int d = d0;
    for (;;) {
      a.darts.push_back(d);
      used[sz(dart_edge(d))] = 1;
      int v = m.head(d);
      if (deg[sz(v)] != 2) break;
      const auto& at = ends_at[sz(v)];
      int h = head_end(d);
      int other = at.first == h ? at.second : at.first;
      int nd = dart_from_end(other);
      if (nd == d0) break;
      d = nd;
    }
    a.internal = std::all_of(a.darts.begin(), a.darts.end(),
                             [&](int x) { return face_uses[sz(dart_edge(x))] == 2; });
    out.push_back(std::move(a));
  };
  for (int x = 0; x < 2 * m.num_edges; ++x) {
    if (deg[sz(m.end_vertex[sz(x)])] == 2 || used[sz(x / 2)]) continue;
    walk(dart_from_end(x));
  }
  for (int e = 0; e < m.num_edges; ++e)
    if (!used[sz(e)]) walk(make_dart(e, 1));
  return out;
}

std::vector<std::vector<int>> selected_arcs(const SMap& s) {
  auto occ = face_occurrences(s);
  auto deg = vertex_degrees(s.map);
  auto both_selected = [&](int e) {
    if (occ.size(e) != 2) return false;
    const FacePos &x = occ.at(e, 0), &y = occ.at(e, 1);
    return s.face[sz(x.face)].sel[sz(x.pos)] && s.face[sz(y.face)].sel[sz(y.pos)];
  };
  auto continues = [&](int e1, int e2) {
    const FacePos a[2] = {occ.at(e1, 0), occ.at(e1, 1)};
    const FacePos b[2] = {occ.at(e2, 0), occ.at(e2, 1)};
    auto side = [&](const FacePos& x, const FacePos& y) {
      return x.face == y.face && joined(s.face[sz(x.face)], x.pos, y.pos);
    };
    return (side(a[0], b[0]) && side(a[1], b[1])) || (side(a[0], b[1]) && side(a[1], b[0]));
  };
  std::vector<std::vector<int>> out;
  for (const auto& arc : arcs(s.map)) {
    if (!arc.internal) continue;
    std::vector<std::vector<int>> runs;
    std::vector<int> cur;
    for (int d : arc.darts) {
      int e = dart_edge(d);
      if (!both_selected(e)) {
        if (!cur.empty()) runs.push_back(std::move(cur));
        cur.clear();
        continue;
      }
      if (!cur.empty() && !continues(dart_edge(cur.back()), e)) {
        runs.push_back(std::move(cur));
        cur.clear();
      }
      cur.push_back(d);
    }
    if (!cur.empty()) runs.push_back(std::move(cur));
    // a closed arc may have been cut in the middle of a selected run
    const int v = s.map.tail(arc.darts.front());
    bool closed = s.map.head(arc.darts.back()) == v && deg[sz(v)] == 2;
    if (closed && runs.size() > 1 && runs.front().front() == arc.darts.front() &&
        runs.back().back() == arc.darts.back() &&
        continues(dart_edge(runs.back().back()), dart_edge(runs.front().front()))) {
      runs.back().insert(runs.back().end(), runs.front().begin(), runs.front().end());
      runs.erase(runs.begin());
    }
    for (auto& r : runs) out.push_back(std::move(r));
  }
  return out;
}

namespace {

bool is_connected(const CombMap& m) {
  if (m.num_vertices == 0) return true;
  UnionFind uf(m.num_vertices);
  for (int e = 0; e < m.num_edges; ++e) uf.unite(m.end_vertex[sz(2 * e)], m.end_vertex[sz(2 * e + 1)]);
  int roots = 0;
  for (int v = 0; v < m.num_vertices; ++v)
    if (uf.find(v) == v) ++roots;
  return roots == 1;
}

}  // namespace

int arc_index(const SMap& s, const std::vector<int>& arc) {
  if (arc.empty()) return -1;
  int e = dart_edge(arc.front());
  for (const auto& fs : s.face)
    for (int d : fs.reading)
      if (dart_edge(d) == e) return fs.index;
  return -1;
}

SMap derive_smap(const Diagram& d, const RelatorLayouts& rel, bool with_closure) {
  SMap s;
  for (int f = 0; f < d.map.num_faces(); ++f) {
    if (d.face_class[sz(f)] != FaceClass::two) throw std::invalid_argument("auxiliary faces have no S-map structure");
    const auto& lab = d.face_label[sz(f)];
    auto it = rel.find(lab.relator);
    if (it == rel.end()) throw std::invalid_argument("unknown relator " + std::to_string(lab.relator));
    const Relator& r = it->second;
    FaceSel fs;
    fs.index = lab.relator;
    fs.reading = face_reading(d, f);
    fs.u_len = r.u_len;
    const int n = static_cast<int>(fs.reading.size());
    if (static_cast<std::size_t>(n) != r.word.size())
      throw std::invalid_argument("face " + std::to_string(f + 1) + " length differs from its relator");
    fs.sel.assign(sz(n), 0);
    fs.link.assign(sz(n), 0);
    fs.tag.assign(sz(n), -1);
    std::vector<int> block(sz(n), -1);
    for (int p = 0; p < n; ++p) {
      BlockRef b = r.locate(p);
      if (b.kind == BlockRef::u_block) {
        fs.sel[sz(p)] = 1;
        fs.tag[sz(p)] = u_tag(lab.relator, b.j, b.offset);
        block[sz(p)] = 2 * b.j;
      } else if (b.kind == BlockRef::u_inverse) {
        fs.sel[sz(p)] = 1;
        fs.tag[sz(p)] = u_tag(lab.relator, b.j, r.u_len - 1 - b.offset);
        block[sz(p)] = 2 * b.j + 1;
      }
    }
    for (int p = 0; p < n; ++p) {
      int q = (p + 1) % n;
      fs.link[sz(p)] = fs.sel[sz(p)] && fs.sel[sz(q)] && block[sz(p)] == block[sz(q)] && q != 0;
    }
    s.face.push_back(std::move(fs));
  }
  if (with_closure) {
    for (int c = 0; c < d.map.num_contours(); ++c) {
      GroupWord w = contour_label(d, c);
      if (w.empty() || !is_cyclically_reduced(w) || !is_z_concatenation(w))
        throw std::invalid_argument("contour " + std::to_string(c + 1) +
                                    " is not a cyclically reduced z-concatenation");
    }
    s.map = closure(d.map);
    for (const auto& c : d.map.contours) {
      FaceSel fs;
      fs.index = -1;
      fs.reading = c.sides;
      const std::size_t n = c.sides.size();
      fs.sel.assign(n, 1);
      fs.tag.assign(n, -1);
      fs.link.assign(n, 0);
      for (std::size_t p = 0; p < n; ++p) fs.link[p] = c.sides[(p + 1) % n] != -c.sides[p];
      s.face.push_back(std::move(fs));
    }
  } else {
    s.map = d.map;
  }
  auto occ = face_occurrences(s);
  for (auto& arc : selected_arcs(s)) {
    bool exc = true;
    int idx = -2;
    for (int dart : arc) {
      const FacePos& o0 = occ.at(dart_edge(dart), 0);
      const FacePos& o1 = occ.at(dart_edge(dart), 1);
      const FaceSel& x = s.face[sz(o0.face)];
      const FaceSel& y = s.face[sz(o1.face)];
      std::int64_t tx = x.tag[sz(o0.pos)], ty = y.tag[sz(o1.pos)];
      if (x.index < 0 || x.index != y.index || tx < 0 || tx != ty || (idx != -2 && idx != x.index)) {
        exc = false;
        break;
      }
      idx = x.index;
    }
    if (exc) s.exceptional.push_back(std::move(arc));
  }
  return s;
}

std::pair<int, int> kappa(const SMap& s, int face) {
  const FaceSel& fs = s.face[sz(face)];
  const int n = static_cast<int>(fs.reading.size());
  if (fs.index < 0 || n == 0) return {0, 0};
  if (std::none_of(fs.sel.begin(), fs.sel.end(), [](char c) { return c != 0; })) return {0, 0};
  // items 2p: edge p, 2p+1: corner after edge p
  const int items = 2 * n;
  auto kept = [&](int i) { return i % 2 == 0 ? !fs.sel[sz(i / 2)] : !fs.link[sz(i / 2)]; };
  int start = -1;
  for (int i = 0; i < items; ++i)
    if (!kept(i)) {
      start = i;
      break;
    }
  if (start < 0) return {0, 0};
  auto deg = vertex_degrees(s.map);
  int k = 0, kp = 0;
  int i = 0;
  while (i < items) {
    int at = (start + i) % items;
    if (!kept(at)) {
      ++i;
      continue;
    }
    int len = 0, first = at;
    while (i < items && kept((start + i) % items)) {
      ++len;
      ++i;
    }
    ++k;
    if (len > 1 || first % 2 == 0) {
      ++kp;
    } else {
      int v = s.map.head(fs.reading[sz(first / 2)]);
      if (deg[sz(v)] == 1) ++kp;
    }
  }
  return {k, kp};
}

Weights family_weights(const PresentationFamily& fam) {
  Weights w;
  for (int n = 1; n <= fam.size(); ++n) {
    const auto& p = fam.param(n);
    w.lambda[n] = p.lambda;
    w.mu[n] = p.mu;
    w.nu[n] = p.nu;
  }
  return w;
}

Weights measure_weights(const RelatorLayouts& rel) {
  Weights w;
  std::map<int, std::vector<std::vector<Run>>> blocks;
  for (const auto& [n, r] : rel)
    for (int j = 1; j <= r.k; ++j) blocks[n].push_back(to_runs(r.u_block(j)));
  for (const auto& [n, r] : rel) {
    const auto len = static_cast<long long>(r.word.size());
    w.lambda[n] = Rational(len - 2LL * r.k * r.u_len, len);
    w.nu[n] = Rational(r.u_len, len);
    std::int64_t piece = 0;
    for (int j = 0; j < r.k; ++j) {
      const auto& x = blocks[n][sz(j)];
      for (const auto& [m, list] : blocks)
        for (std::size_t i = 0; i < list.size(); ++i) {
          bool same = m == n && static_cast<int>(i) == j;
          piece = std::max(piece, max_common_subword_runs(x, list[i], same).length);
          piece = std::max(piece, max_common_subword_runs(x, to_runs(inverse(from_runs(list[i])))).length);
        }
    }
    w.mu[n] = Rational(piece, len);
  }
  return w;
}

Rational face_gamma(const SMap& s, const Weights& w, int face) {
  int idx = s.face[sz(face)].index;
  auto [k, kp] = kappa(s, face);
  return get_weight(w.lambda, idx, "lambda") + Rational(3 + k + kp) * get_weight(w.mu, idx, "mu") +
         Rational(2) * get_weight(w.nu, idx, "nu");
}

Rational index_gamma(const Weights& w, int index, int k) {
  return get_weight(w.lambda, index, "lambda") + Rational(3 + 4 * k) * get_weight(w.mu, index, "mu") +
         Rational(2) * get_weight(w.nu, index, "nu");
}

const char* status_name(CheckResult::Status s) {
  switch (s) {
    case CheckResult::holds:
      return "holds";
    case CheckResult::violated:
      return "violated";
    case CheckResult::hypothesis_failed:
      return "hypothesis-failed";
  }
  return "?";
}

std::string format_check(const CheckResult& r) {
  std::string out = "CHECK " + r.name + " " + status_name(r.status);
  if (!r.witness.empty()) out += " " + r.witness;
  return out;
}

std::vector<int> boundary_darts(const CombMap& m, const std::vector<int>& faces) {
  auto sub = submap(m, faces);
  if (sub.map.contours.empty()) return {};
  std::vector<int> out;
  for (int d : sub.map.contours.front().sides)
    out.push_back(make_dart(sub.edges[sz(dart_edge(d))], d > 0 ? 1 : -1));
  return out;
}

bool is_simple_disc(const CombMap& m, const std::vector<int>& faces) {
  if (faces.empty()) return false;
  auto sub = submap(m, faces);
  if (sub.map.num_contours() != 1 || sub.map.contours[0].sides.empty()) return false;
  if (euler_characteristic(sub.map) != 1 || !is_connected(sub.map)) return false;
  std::set<int> seen;
  for (int d : sub.map.contours[0].sides) {
    int amb = make_dart(sub.edges[sz(dart_edge(d))], d > 0 ? 1 : -1);
    if (!seen.insert(m.tail(amb)).second) return false;
  }
  return true;
}

CheckResult check_Z2(const SMap& s, const std::vector<int>& phi) {
  const std::string name = "Z2";
  if (!is_simple_disc(s.map, phi)) return make_result(name, CheckResult::hypothesis_failed, "not-a-simple-disc");
  auto in = face_flags(s, phi);
  auto c = boundary_darts(s.map, phi);
  const int L = static_cast<int>(c.size());
  auto occ = face_occurrences(s);
  // outside face position and reading direction of each boundary edge
  std::vector<int> face(sz(L), -1), pos(sz(L), -1), dir(sz(L), 0);
  std::vector<char> ok(sz(L), 0), cont(sz(L), 0);
  for (int i = 0; i < L; ++i) {
    const int e = dart_edge(c[sz(i)]);
    for (std::size_t t = 0; t < occ.size(e); ++t) {
      const FacePos& o = occ.at(e, static_cast<int>(t));
      if (in[sz(o.face)]) continue;
      int r = s.face[sz(o.face)].reading[sz(o.pos)];
      face[sz(i)] = o.face;
      pos[sz(i)] = o.pos;
      dir[sz(i)] = r == c[sz(i)] ? 1 : -1;
      ok[sz(i)] = s.face[sz(o.face)].sel[sz(o.pos)];
    }
  }
  for (int i = 0; i < L; ++i) {
    int j = (i + 1) % L;
    if (!ok[sz(i)] || !ok[sz(j)] || face[sz(i)] != face[sz(j)] || dir[sz(i)] != dir[sz(j)]) continue;
    const FaceSel& fs = s.face[sz(face[sz(i)])];
    const int n = static_cast<int>(fs.reading.size());
    int expect = ((pos[sz(i)] + dir[sz(i)]) % n + n) % n;
    cont[sz(i)] = expect == pos[sz(j)] && joined(fs, pos[sz(i)], pos[sz(j)]);
  }
  std::vector<int> reach(sz(L), 0);
  int brk = -1;
  for (int i = 0; i < L; ++i)
    if (!cont[sz(i)]) brk = i;
  if (brk < 0) {
    std::fill(reach.begin(), reach.end(), L);
  } else {
    for (int t = 0; t < L; ++t) {
      int i = ((brk - t) % L + L) % L;
      int nxt = (i + 1) % L;
      reach[sz(i)] = ok[sz(i)] ? 1 + (cont[sz(i)] ? reach[sz(nxt)] : 0) : 0;
    }
  }
  for (int i = 0; i < L; ++i) {
    int r = reach[sz(i)];
    int rest = r >= L ? 0 : reach[sz((i + r) % L)];
    if (r + rest >= L) {
      std::string w = "shift=" + std::to_string(i) + " split=" + std::to_string(std::min(r, L));
      w += " faces=" + std::to_string(face[sz(i)] + 1);
      if (r < L) w += "," + std::to_string(face[sz((i + r) % L)] + 1);
      return make_result(name, CheckResult::violated, w);
    }
  }
  return make_result(name, CheckResult::holds);
}

namespace {

struct ExcInfo {
  std::vector<int> index;     // per exceptional arc
  std::vector<char> internal;  // internal in the submap
  std::vector<char> touches;   // has an edge on a face of the submap
};

ExcInfo exceptional_info(const SMap& s, const std::vector<int>& counts) {
  ExcInfo x;
  for (const auto& arc : s.exceptional) {
    x.index.push_back(arc_index(s, arc));
    bool internal = true, touches = false;
    for (int d : arc) {
      int c = counts[sz(dart_edge(d))];
      internal = internal && c == 2;
      touches = touches || c > 0;
    }
    x.internal.push_back(internal);
    x.touches.push_back(touches);
  }
  return x;
}

}  // namespace

CheckResult check_Y(const SMap& s, const std::vector<int>& gamma) {
  const std::string name = "Y";
  if (gamma.empty()) return make_result(name, CheckResult::holds);
  auto sub = submap(s.map, gamma);
  if (!is_connected(sub.map)) return make_result(name, CheckResult::hypothesis_failed, "not-connected");
  auto counts = edge_counts(s, gamma);
  auto info = exceptional_info(s, counts);
  std::vector<int> sub_edge(sz(s.map.num_edges), -1);
  for (std::size_t e = 0; e < sub.edges.size(); ++e) sub_edge[sz(sub.edges[e])] = static_cast<int>(e);
  auto sub_dart = [&](int d) { return make_dart(sub_edge[sz(dart_edge(d))], d > 0 ? 1 : -1); };
  std::set<int> indices;
  for (std::size_t a = 0; a < s.exceptional.size(); ++a)
    if (info.internal[a]) indices.insert(info.index[a]);
  for (int i : indices) {
    const CombMap& g = sub.map;
    std::vector<char> face_gone(sz(g.num_faces()), 0), edge_gone(sz(g.num_edges), 0),
        vert_gone(sz(g.num_vertices), 0);
    int b_count = 0;
    for (int f = 0; f < g.num_faces(); ++f)
      if (s.face[sz(sub.faces[sz(f)])].index == i) {
        face_gone[sz(f)] = 1;
        ++b_count;
      }
    for (std::size_t a = 0; a < s.exceptional.size(); ++a) {
      if (!info.internal[a] || info.index[a] != i) continue;
      const auto& arc = s.exceptional[a];
      for (std::size_t t = 0; t < arc.size(); ++t) {
        int d = sub_dart(arc[t]);
        edge_gone[sz(dart_edge(d))] = 1;
        if (t + 1 < arc.size()) vert_gone[sz(g.head(d))] = 1;
      }
    }
    UnionFind uf(g.num_vertices);
    for (int e = 0; e < g.num_edges; ++e)
      if (!edge_gone[sz(e)]) uf.unite(g.end_vertex[sz(2 * e)], g.end_vertex[sz(2 * e + 1)]);
    for (int f = 0; f < g.num_faces(); ++f) {
      if (face_gone[sz(f)]) continue;
      const auto& poly = g.faces[sz(f)];
      for (int d : poly) uf.unite(g.tail(d), g.tail(poly.front()));
    }
    std::map<int, long> chi;
    for (int v = 0; v < g.num_vertices; ++v)
      if (!vert_gone[sz(v)]) chi[uf.find(v)] += 1;
    for (int e = 0; e < g.num_edges; ++e)
      if (!edge_gone[sz(e)]) chi[uf.find(g.end_vertex[sz(2 * e)])] -= 1;
    for (int f = 0; f < g.num_faces(); ++f)
      if (!face_gone[sz(f)]) chi[uf.find(g.tail(g.faces[sz(f)].front()))] += 1;
    std::set<int> marked;
    for (std::size_t a = 0; a < s.exceptional.size(); ++a)
      if (!info.internal[a] && info.touches[a] && info.index[a] == i)
        for (int d : s.exceptional[a])
          if (sub_edge[sz(dart_edge(d))] >= 0) {
            marked.insert(uf.find(g.tail(sub_dart(d))));
            break;
          }
    int qualifying = 0;
    for (const auto& [root, x] : chi)
      if (x == 1 || marked.count(root)) ++qualifying;
    if (qualifying > b_count)
      return make_result(name, CheckResult::violated,
                         "index=" + std::to_string(i) + " components=" + std::to_string(qualifying) +
                             " faces=" + std::to_string(b_count));
  }
  return make_result(name, CheckResult::holds);
}

CheckResult check_D(const SMap& s, const std::vector<int>& sub, const Weights& w) {
  auto in = face_flags(s, sub);
  std::vector<char> sub_edge(sz(s.map.num_edges), 0);
  for (int f : sub)
    for (int d : s.map.faces[sz(f)]) sub_edge[sz(dart_edge(d))] = 1;
  std::vector<int> exc_of(sz(s.map.num_edges), -1);
  for (std::size_t a = 0; a < s.exceptional.size(); ++a)
    for (int d : s.exceptional[a]) exc_of[sz(dart_edge(d))] = static_cast<int>(a);
  auto occ = face_occurrences(s);
  auto len_of = [&](int f) { return static_cast<long long>(s.face[sz(f)].reading.size()); };

  for (int f : sub) {
    const FaceSel& fs = s.face[sz(f)];
    if (fs.index < 0) continue;
    long long L = std::count(fs.sel.begin(), fs.sel.end(), 0);
    Rational bound = get_weight(w.lambda, fs.index, "lambda") * Rational(len_of(f));
    if (Rational(L) > bound)
      return make_result("D1", CheckResult::violated,
                         "face=" + std::to_string(f + 1) + " L=" + std::to_string(L) + " bound=" + to_string(bound));
  }
  for (const auto& arc : selected_arcs(s)) {
    long long M = 0;
    for (int d : arc)
      if (exc_of[sz(dart_edge(d))] < 0) ++M;
    const int e0 = dart_edge(arc.front());
    for (std::size_t t = 0; t < occ.size(e0); ++t) {
      const FacePos& o = occ.at(e0, static_cast<int>(t));
      if (!in[sz(o.face)] || s.face[sz(o.face)].index < 0) continue;
      Rational bound = get_weight(w.mu, s.face[sz(o.face)].index, "mu") * Rational(len_of(o.face));
      if (Rational(M) > bound)
        return make_result("D2", CheckResult::violated,
                           "face=" + std::to_string(o.face + 1) + " M=" + std::to_string(M) +
                               " bound=" + to_string(bound));
    }
  }
  std::map<int, Rational> nu_bound;  // least nu(Theta)|Theta| per index over the submap
  for (int f : sub) {
    int idx = s.face[sz(f)].index;
    if (idx < 0) continue;
    Rational b = get_weight(w.nu, idx, "nu") * Rational(len_of(f));
    auto it = nu_bound.find(idx);
    if (it == nu_bound.end() || b < it->second) nu_bound[idx] = b;
  }
  for (int f = 0; f < static_cast<int>(s.face.size()); ++f) {
    const FaceSel& fs = s.face[sz(f)];
    auto nb = nu_bound.find(fs.index);
    if (nb == nu_bound.end()) continue;
    const int n = static_cast<int>(fs.reading.size());
    // walk maximal runs that are selected, joined, and inside the submap
    int start = -1;
    for (int p = 0; p < n; ++p) {
      int prev = (p + n - 1) % n;
      bool in_run = fs.sel[sz(p)] && sub_edge[sz(dart_edge(fs.reading[sz(p)]))];
      bool prev_in = fs.sel[sz(prev)] && sub_edge[sz(dart_edge(fs.reading[sz(prev)]))] && fs.link[sz(prev)];
      if (in_run && !prev_in) {
        start = p;
        break;
      }
    }
    std::vector<std::vector<int>> runs;
    if (start < 0) {
      bool all = n > 0 && fs.sel[0] && sub_edge[sz(dart_edge(fs.reading[0]))];
      if (all) {
        runs.emplace_back();
        for (int p = 0; p < n; ++p) runs.back().push_back(dart_edge(fs.reading[sz(p)]));
      }
    } else {
      std::vector<int> cur;
      for (int t = 0; t < n; ++t) {
        int p = (start + t) % n;
        bool in_run = fs.sel[sz(p)] && sub_edge[sz(dart_edge(fs.reading[sz(p)]))];
        if (!in_run) {
          if (!cur.empty()) runs.push_back(std::move(cur));
          cur.clear();
          continue;
        }
        int prev = (p + n - 1) % n;
        if (!cur.empty() && !fs.link[sz(prev)]) {
          runs.push_back(std::move(cur));
          cur.clear();
        }
        cur.push_back(dart_edge(fs.reading[sz(p)]));
      }
      if (!cur.empty()) runs.push_back(std::move(cur));
    }
    for (const auto& run : runs) {
      std::map<int, int> hits;
      for (int e : run)
        if (exc_of[sz(e)] >= 0) ++hits[exc_of[sz(e)]];
      long long N = 0;
      for (const auto& [a, h] : hits)
        if (h == static_cast<int>(s.exceptional[sz(a)].size())) N += h;
      if (Rational(N) > nb->second)
        return make_result("D3", CheckResult::violated,
                           "face=" + std::to_string(f + 1) + " N=" + std::to_string(N) +
                               " bound=" + to_string(nb->second));
    }
  }
  return make_result("D", CheckResult::holds);
}

SelectedEstimate estimate_selected(const SMap& s, const std::vector<int>& C, const std::vector<int>& D) {
  SelectedEstimate out;
  out.result.name = "selected-arcs";
  const int F = static_cast<int>(s.face.size());
  if (!is_connected(s.map)) {
    out.result.status = CheckResult::hypothesis_failed;
    out.result.witness = "not-connected";
    return out;
  }
  const long chi = euler_characteristic(s.map);
  const long n = s.map.num_contours();
  if (n == 0 && F == 2 && chi == 2 && all_selected(s.face[0]) && all_selected(s.face[1])) {
    out.result.status = CheckResult::hypothesis_failed;
    out.result.witness = "bad-elementary-sphere";
    return out;
  }
  out.A = selected_arcs(s);
  if (out.A.empty()) return out;
  auto inC = face_flags(s, C);
  auto inD = face_flags(s, D);
  auto occ = face_occurrences(s);
  std::vector<std::vector<int>> incident(out.A.size());
  std::vector<char> inB(sz(F), 0);
  for (std::size_t a = 0; a < out.A.size(); ++a) {
    const int e0 = dart_edge(out.A[a].front());
    for (std::size_t t = 0; t < occ.size(e0); ++t) {
      const FacePos& o = occ.at(e0, static_cast<int>(t));
      if (std::find(incident[a].begin(), incident[a].end(), o.face) == incident[a].end())
        incident[a].push_back(o.face);
      inB[sz(o.face)] = 1;
    }
  }
  // the Z(2) hypothesis, checked over all qualifying face sets
  if (F > 12) {
    out.result.status = CheckResult::hypothesis_failed;
    out.result.witness = "too-many-faces-to-verify-Z2";
    return out;
  }
  std::vector<int> free_faces;
  for (int f = 0; f < F; ++f)
    if (!inC[sz(f)]) free_faces.push_back(f);
  for (int mask = 1; mask < (1 << free_faces.size()); ++mask) {
    std::vector<int> phi;
    for (std::size_t t = 0; t < free_faces.size(); ++t)
      if (mask >> t & 1) phi.push_back(free_faces[t]);
    if (!is_simple_disc(s.map, phi)) continue;
    auto counts = edge_counts(s, phi);
    bool misses_arc = std::any_of(out.A.begin(), out.A.end(), [&](const std::vector<int>& arc) {
      return std::any_of(arc.begin(), arc.end(), [&](int d) { return counts[sz(dart_edge(d))] == 0; });
    });
    if (!misses_arc) continue;
    auto z = check_Z2(s, phi);
    if (z.status == CheckResult::violated) {
      out.result.status = CheckResult::hypothesis_failed;
      out.result.witness = "Z2-fails-on=" + join_ints([&] {
        std::vector<int> v;
        for (int f : phi) v.push_back(f + 1);
        return v;
      }());
      return out;
    }
  }
  auto weight = [&](int f) {
    auto [k, kp] = kappa(s, f);
    return 3L + k + kp;
  };
  long bound = -3 * chi - n;
  long e_bound = -3 * chi - n;
  for (int f = 0; f < F; ++f) {
    if (inB[sz(f)]) bound += weight(f);
    if (!inB[sz(f)] && inC[sz(f)]) bound += 2;
    bool b_minus_d = inB[sz(f)] && !inD[sz(f)];
    if (b_minus_d) e_bound += weight(f);
    if (inC[sz(f)] && !b_minus_d) e_bound += 2;
  }
  out.bound = bound;
  out.e_bound = e_bound;
  if (static_cast<long>(out.A.size()) > bound) {
    out.result.status = CheckResult::violated;
    out.result.witness = "arcs=" + std::to_string(out.A.size()) + " bound=" + std::to_string(bound);
    return out;
  }
  RelationInstance inst;
  inst.a_size = static_cast<int>(out.A.size());
  std::vector<int> targets;
  std::vector<int> cap;
  for (int f = 0; f < F; ++f)
    if (inD[sz(f)]) {
      targets.push_back(f);
      auto [k, kp] = kappa(s, f);
      cap.push_back((inC[sz(f)] ? 1 : 3) + k + kp);
    }
  cap.push_back(static_cast<int>(std::max(0L, e_bound)));
  inst.b_size = static_cast<int>(cap.size());
  inst.capacity = cap;
  for (std::size_t a = 0; a < out.A.size(); ++a) {
    for (std::size_t t = 0; t < targets.size(); ++t)
      if (std::find(incident[a].begin(), incident[a].end(), targets[t]) != incident[a].end())
        inst.pairs.push_back({static_cast<int>(a), static_cast<int>(t)});
    inst.pairs.push_back({static_cast<int>(a), inst.b_size - 1});
  }
  auto res = capacitated_assignment(inst);
  if (!res.ok) {
    out.result.status = CheckResult::violated;
    out.result.witness = "no-assignment deficient=" + join_ints(res.deficient);
    return out;
  }
  for (int y : res.h) out.f.push_back(y == inst.b_size - 1 ? -1 : targets[sz(y)]);
  return out;
}

ExceptionalEstimate estimate_exceptional(const SMap& s, const std::vector<int>& gamma) {
  ExceptionalEstimate out;
  out.result.name = "exceptional-arcs";
  auto y = check_Y(s, gamma);
  if (y.status != CheckResult::holds) {
    out.result.status = CheckResult::hypothesis_failed;
    out.result.witness = "Y-" + std::string(status_name(y.status)) + (y.witness.empty() ? "" : " " + y.witness);
    return out;
  }
  auto sub = submap(s.map, gamma);
  out.euler = euler_characteristic(sub.map);
  auto counts = edge_counts(s, gamma);
  auto info = exceptional_info(s, counts);
  for (int f : gamma) {
    int idx = s.face[sz(f)].index;
    out.B[idx] += 1;
    out.A[idx] += 0;
    out.delta[idx] += 0;
  }
  std::map<int, std::vector<std::size_t>> by_index;
  for (std::size_t a = 0; a < s.exceptional.size(); ++a) {
    int i = info.index[a];
    if (info.internal[a]) {
      out.A[i] += 1;
      by_index[i].push_back(a);
    } else if (info.touches[a]) {
      out.delta[i] = 1;
    }
  }
  for (const auto& [i, a] : out.A) {
    if (a == 0) continue;
    long rhs = 2L * out.B[i] - out.euler - out.delta[i];
    if (a > rhs) {
      out.result.status = CheckResult::violated;
      out.result.witness = "index=" + std::to_string(i) + " A=" + std::to_string(a) + " bound=" + std::to_string(rhs);
      return out;
    }
  }
  // the same bound for every nonempty union of indices
  std::vector<int> idx;
  for (const auto& [i, a] : out.A)
    if (a > 0) idx.push_back(i);
  if (idx.size() <= 12) {
    for (int mask = 1; mask < (1 << idx.size()); ++mask) {
      long a = 0, rhs = -out.euler;
      for (std::size_t t = 0; t < idx.size(); ++t)
        if (mask >> t & 1) {
          a += out.A[idx[t]];
          rhs += 2L * out.B[idx[t]] - out.delta[idx[t]];
        }
      if (a > rhs) {
        out.result.status = CheckResult::violated;
        out.result.witness = "index-set-mask=" + std::to_string(mask) + " A=" + std::to_string(a) +
                             " bound=" + std::to_string(rhs);
        return out;
      }
    }
  }
  for (const auto& [i, list] : by_index) {
    long excess = static_cast<long>(list.size()) - (2L * out.B[i] - out.delta[i]);
    for (long t = 0; t < excess; ++t) out.E.push_back(s.exceptional[list[sz(t)]]);
  }
  if (!out.E.empty() && static_cast<long>(out.E.size()) > -out.euler) {
    out.result.status = CheckResult::violated;
    out.result.witness = "E=" + std::to_string(out.E.size()) + " bound=" + std::to_string(-out.euler);
  }
  return out;
}

CheckResult lemma46_check(const SMap& s, const Weights& w) {
  const std::string name = "lemma46";
  const int F = static_cast<int>(s.face.size());
  std::vector<int> all(sz(F));
  std::iota(all.begin(), all.end(), 0);
  for (const auto& fs : s.face)
    if (fs.index < 0) return make_result(name, CheckResult::hypothesis_failed, "outer-faces");
  if (!is_connected(s.map)) return make_result(name, CheckResult::hypothesis_failed, "not-connected");
  const long chi = euler_characteristic(s.map);
  const long n = s.map.num_contours();
  if (n + 3 * chi < 0) return make_result(name, CheckResult::hypothesis_failed, "n+3chi<0");
  auto d = check_D(s, all, w);
  if (d.status != CheckResult::holds)
    return make_result(name, CheckResult::hypothesis_failed, d.name + "-" + status_name(d.status) + " " + d.witness);
  auto y = check_Y(s, all);
  if (y.status != CheckResult::holds)
    return make_result(name, CheckResult::hypothesis_failed, "Y-" + std::string(status_name(y.status)) + " " + y.witness);
  Rational rhs = 0;
  for (int f = 0; f < F; ++f) {
    Rational g = face_gamma(s, w, f);
    if (g > Rational(1, 2))
      return make_result(name, CheckResult::hypothesis_failed, "gamma>1/2 face=" + std::to_string(f + 1));
    rhs += (Rational(1) - Rational(2) * g) * Rational(static_cast<long long>(s.face[sz(f)].reading.size()));
  }
  long long lhs = 0;
  for (const auto& c : s.map.contours) lhs += static_cast<long long>(c.sides.size());
  if (Rational(lhs) < rhs)
    return make_result(name, CheckResult::violated, "boundary=" + std::to_string(lhs) + " weighted-area=" + to_string(rhs));
  return make_result(name, CheckResult::holds, "boundary=" + std::to_string(lhs) + " weighted-area=" + to_string(rhs));
}

bool is_convenient(const Diagram& d, const SMap& s) {
  if (!is_weakly_strictly_reduced(d)) return false;
  auto occ = face_occurrences(s);
  for (const auto& arc : s.exceptional) {
    const FacePos& o = occ.at(dart_edge(arc.front()), 0);
    if (static_cast<std::int64_t>(arc.size()) != s.face[sz(o.face)].u_len) return false;
  }
  return true;
}

}  // namespace vkd
