#include "vkd/surface.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace vkd {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

void CombMap::rebuild_vertices() {
  const int ends = 2 * num_edges;
  UnionFind uf(static_cast<std::size_t>(ends));
  for (int p = 0; p < num_polygons(); ++p) {
    const auto& poly = polygon(p);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      int a = poly[i], b = poly[(i + 1) % n];
      if (dart_edge(a) >= num_edges || dart_edge(b) >= num_edges || a == 0 || b == 0) continue;
      uf.unite(head_end(a), tail_end(b));
    }
  }
  end_vertex.assign(static_cast<std::size_t>(ends), -1);
  std::vector<int> id_of_root(static_cast<std::size_t>(ends), -1);
  int next = 0;
  for (int x = 0; x < ends; ++x) {
    int r = uf.find(x);
    if (id_of_root[static_cast<std::size_t>(r)] < 0) id_of_root[static_cast<std::size_t>(r)] = next++;
    end_vertex[static_cast<std::size_t>(x)] = id_of_root[static_cast<std::size_t>(r)];
  }
  for (auto& c : contours) {
    if (c.sides.empty())
      c.vertex = next++;
    else
      c.vertex = -1;
  }
  num_vertices = next;
}

int CombMap::tail(int d) const { return end_vertex[static_cast<std::size_t>(tail_end(d))]; }
int CombMap::head(int d) const { return end_vertex[static_cast<std::size_t>(head_end(d))]; }

std::vector<std::vector<Occurrence>> occurrences(const CombMap& m) {
  std::vector<std::vector<Occurrence>> occ(static_cast<std::size_t>(m.num_edges));
  for (int p = 0; p < m.num_polygons(); ++p) {
    const auto& poly = m.polygon(p);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      int e = dart_edge(poly[i]);
      if (poly[i] != 0 && e < m.num_edges) occ[static_cast<std::size_t>(e)].push_back({p, static_cast<int>(i)});
    }
  }
  return occ;
}

std::optional<std::string> validate(const CombMap& m) {
  for (int f = 0; f < m.num_faces(); ++f) {
    if (m.faces[static_cast<std::size_t>(f)].empty()) return "face " + std::to_string(f + 1) + " has an empty contour";
  }
  for (int p = 0; p < m.num_polygons(); ++p)
    for (int d : m.polygon(p))
      if (d == 0 || dart_edge(d) >= m.num_edges)
        return "side " + std::to_string(d) + " names no edge";
  auto occ = occurrences(m);
  for (int e = 0; e < m.num_edges; ++e) {
    auto n = occ[static_cast<std::size_t>(e)].size();
    if (n > 2) return "side overused: edge " + std::to_string(e + 1);
    if (n < 2) return "side unused: edge " + std::to_string(e + 1);
  }
  if (static_cast<int>(m.end_vertex.size()) != 2 * m.num_edges) return "vertices not derived";
  return std::nullopt;
}

long euler_characteristic(const CombMap& m) {
  return static_cast<long>(m.num_vertices) - m.num_edges + m.num_faces();
}

CombMap closure(const CombMap& m) {
  CombMap c;
  c.num_edges = m.num_edges;
  c.faces = m.faces;
  for (const auto& k : m.contours) {
    if (k.sides.empty()) throw std::invalid_argument("closure of a map with a trivial component");
    c.faces.push_back(k.sides);
  }
  c.rebuild_vertices();
  return c;
}

OrientResult orient(const CombMap& m) {
  OrientResult r;
  const int P = m.num_polygons();
  auto occ = occurrences(m);
  r.polygon_sign.assign(static_cast<std::size_t>(P), 0);
  std::vector<int> parent(static_cast<std::size_t>(P), -1), via(static_cast<std::size_t>(P), -1);
  auto path_to_root = [&](int p) {
    std::vector<int> polys{p};
    while (parent[static_cast<std::size_t>(p)] >= 0) {
      p = parent[static_cast<std::size_t>(p)];
      polys.push_back(p);
    }
    return polys;
  };
  for (int root = 0; root < P && r.orientable; ++root) {
    if (r.polygon_sign[static_cast<std::size_t>(root)] != 0) continue;
    r.polygon_sign[static_cast<std::size_t>(root)] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty() && r.orientable) {
      int p = q.front();
      q.pop();
      const auto& poly = m.polygon(p);
      for (std::size_t i = 0; i < poly.size() && r.orientable; ++i) {
        int e = dart_edge(poly[i]);
        for (const Occurrence& o : occ[static_cast<std::size_t>(e)]) {
          if (o.poly == p && o.pos == static_cast<int>(i)) continue;
          int s1 = poly[i] > 0 ? 1 : -1;
          int s2 = m.polygon(o.poly)[static_cast<std::size_t>(o.pos)] > 0 ? 1 : -1;
          int want = -r.polygon_sign[static_cast<std::size_t>(p)] * s1 * s2;
          int& have = r.polygon_sign[static_cast<std::size_t>(o.poly)];
          if (have == 0) {
            have = want;
            parent[static_cast<std::size_t>(o.poly)] = p;
            via[static_cast<std::size_t>(o.poly)] = e;
            q.push(o.poly);
          } else if (have != want) {
            r.orientable = false;
            auto a = path_to_root(p), b = path_to_root(o.poly);
            while (a.size() > 1 && b.size() > 1 && a[a.size() - 2] == b[b.size() - 2]) {
              a.pop_back();
              b.pop_back();
            }
            r.odd_cycle.push_back(e);
            for (std::size_t t = 0; t + 1 < a.size(); ++t) r.odd_cycle.push_back(via[static_cast<std::size_t>(a[t])]);
            for (std::size_t t = 0; t + 1 < b.size(); ++t) r.odd_cycle.push_back(via[static_cast<std::size_t>(b[t])]);
            break;
          }
        }
      }
    }
  }
  if (!r.orientable) r.polygon_sign.clear();
  return r;
}

SurfaceClass classify_closed(const CombMap& m) {
  if (m.num_contours() > 0) throw std::invalid_argument("map is not closed");
  if (m.num_edges == 0) throw std::invalid_argument("empty map");
  if (components(m).size() != 1) throw std::invalid_argument("map is not connected");
  SurfaceClass s;
  s.euler = euler_characteristic(m);
  s.orientable = is_orientable(m);
  if (s.orientable) {
    s.genus = static_cast<int>((2 - s.euler) / 2);
    s.name = s.genus == 0 ? "sphere" : s.genus == 1 ? "torus" : "higher";
  } else {
    s.genus = static_cast<int>(2 - s.euler);
    s.name = s.genus == 1 ? "projective-plane" : s.genus == 2 ? "klein-bottle" : "higher";
  }
  return s;
}

namespace {

SubMap extract(const CombMap& m, const std::vector<int>& polys) {
  SubMap s;
  std::vector<int> new_edge(static_cast<std::size_t>(m.num_edges), -1);
  auto remap = [&](const std::vector<int>& poly) {
    std::vector<int> out;
    out.reserve(poly.size());
    for (int d : poly) {
      int e = dart_edge(d);
      if (new_edge[static_cast<std::size_t>(e)] < 0) {
        new_edge[static_cast<std::size_t>(e)] = static_cast<int>(s.edges.size());
        s.edges.push_back(e);
      }
      out.push_back(make_dart(new_edge[static_cast<std::size_t>(e)], d > 0 ? 1 : -1));
    }
    return out;
  };
  for (int p : polys) {
    if (p < m.num_faces()) {
      s.map.faces.push_back(remap(m.faces[static_cast<std::size_t>(p)]));
      s.faces.push_back(p);
    }
  }
  for (int p : polys) {
    if (p >= m.num_faces()) {
      Contour c;
      c.sides = remap(m.polygon(p));
      s.map.contours.push_back(c);
      s.contours.push_back(p - m.num_faces());
    }
  }
  s.map.num_edges = static_cast<int>(s.edges.size());
  s.map.rebuild_vertices();
  return s;
}

}  // namespace

std::vector<SubMap> components(const CombMap& m) {
  const int P = m.num_polygons();
  UnionFind uf(static_cast<std::size_t>(P));
  auto occ = occurrences(m);
  for (const auto& o : occ)
    for (std::size_t i = 1; i < o.size(); ++i) uf.unite(o[0].poly, o[i].poly);
  std::vector<int> order;
  std::vector<int> slot(static_cast<std::size_t>(P), -1);
  std::vector<std::vector<int>> groups;
  for (int p = 0; p < P; ++p) {
    int r = uf.find(p);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(p);
  }
  std::vector<SubMap> out;
  for (const auto& g : groups) out.push_back(extract(m, g));
  return out;
}

SubMap submap(const CombMap& m, const std::vector<int>& faces, const std::vector<int>& extra_edges,
              const std::vector<int>& extra_vertices) {
  const int P = m.num_polygons();
  std::vector<char> in_g(static_cast<std::size_t>(P), 0);
  std::vector<char> g_edge(static_cast<std::size_t>(m.num_edges), 0);
  for (int f : faces) {
    in_g[static_cast<std::size_t>(f)] = 1;
    for (int d : m.faces[static_cast<std::size_t>(f)]) g_edge[static_cast<std::size_t>(dart_edge(d))] = 1;
  }
  for (int e : extra_edges) g_edge[static_cast<std::size_t>(e)] = 1;
  // both occurrences of every edge, flat
  std::vector<Occurrence> occ(static_cast<std::size_t>(2 * m.num_edges));
  {
    std::vector<unsigned char> cnt(static_cast<std::size_t>(m.num_edges), 0);
    for (int p = 0; p < P; ++p) {
      const auto& poly = m.polygon(p);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        int e = dart_edge(poly[i]);
        auto& c = cnt[static_cast<std::size_t>(e)];
        if (c < 2) occ[static_cast<std::size_t>(2 * e + c)] = {p, static_cast<int>(i)};
        ++c;
      }
    }
  }

  struct State {
    int poly, pos, dir;
  };
  auto dart_at = [&](const State& s) {
    return s.dir * m.polygon(s.poly)[static_cast<std::size_t>(s.pos)];
  };
  auto step = [&](State s) {
    for (;;) {
      const auto& poly = m.polygon(s.poly);
      int n = static_cast<int>(poly.size());
      State cand{s.poly, ((s.pos + s.dir) % n + n) % n, s.dir};
      int c = dart_at(cand);
      int e = dart_edge(c);
      if (g_edge[static_cast<std::size_t>(e)]) return cand;
      const Occurrence& o0 = occ[static_cast<std::size_t>(2 * e)];
      const Occurrence& o1 = occ[static_cast<std::size_t>(2 * e + 1)];
      Occurrence other = (o0.poly == cand.poly && o0.pos == cand.pos) ? o1 : o0;
      int q = m.polygon(other.poly)[static_cast<std::size_t>(other.pos)];
      s = State{other.poly, other.pos, q == c ? -1 : 1};
    }
  };

  SubMap s;
  std::vector<int> new_edge(static_cast<std::size_t>(m.num_edges), -1);
  for (int e = 0; e < m.num_edges; ++e)
    if (g_edge[static_cast<std::size_t>(e)]) {
      new_edge[static_cast<std::size_t>(e)] = static_cast<int>(s.edges.size());
      s.edges.push_back(e);
    }
  auto nd = [&](int d) { return make_dart(new_edge[static_cast<std::size_t>(dart_edge(d))], d > 0 ? 1 : -1); };
  for (int f : faces) {
    std::vector<int> poly;
    for (int d : m.faces[static_cast<std::size_t>(f)]) poly.push_back(nd(d));
    s.map.faces.push_back(std::move(poly));
    s.faces.push_back(f);
  }
  std::vector<std::vector<char>> seen(static_cast<std::size_t>(P));
  for (int p = 0; p < P; ++p) seen[static_cast<std::size_t>(p)].assign(m.polygon(p).size(), 0);
  for (int p = 0; p < P; ++p) {
    if (in_g[static_cast<std::size_t>(p)]) continue;
    const auto& poly = m.polygon(p);
    for (int i = 0; i < static_cast<int>(poly.size()); ++i) {
      if (!g_edge[static_cast<std::size_t>(dart_edge(poly[static_cast<std::size_t>(i)]))] ||
          seen[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)])
        continue;
      Contour c;
      State st{p, i, 1};
      do {
        seen[static_cast<std::size_t>(st.poly)][static_cast<std::size_t>(st.pos)] = 1;
        c.sides.push_back(nd(dart_at(st)));
        st = step(st);
      } while (!(st.poly == p && st.pos == i));
      s.map.contours.push_back(std::move(c));
      // a contour that is exactly an ambient contour keeps its identity
      bool same = p >= m.num_faces() && i == 0 && s.map.contours.back().sides.size() == poly.size();
      s.contours.push_back(same ? p - m.num_faces() : -1);
    }
  }
  // vertices of the ambient map touched by the submap
  std::vector<char> touched(static_cast<std::size_t>(m.num_vertices), 0);
  for (int e : s.edges) {
    touched[static_cast<std::size_t>(m.end_vertex[static_cast<std::size_t>(2 * e)])] = 1;
    touched[static_cast<std::size_t>(m.end_vertex[static_cast<std::size_t>(2 * e + 1)])] = 1;
  }
  std::vector<int> lone(extra_vertices);
  std::sort(lone.begin(), lone.end());
  lone.erase(std::unique(lone.begin(), lone.end()), lone.end());
  for (int v : lone)
    if (!touched[static_cast<std::size_t>(v)]) {
      s.map.contours.push_back(Contour{});
      s.contours.push_back(-1);
    }
  s.map.num_edges = static_cast<int>(s.edges.size());
  s.map.rebuild_vertices();
  return s;
}

}  // namespace vkd
