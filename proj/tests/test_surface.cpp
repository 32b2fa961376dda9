#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "vkd/surface.hpp"

using namespace vkd;

namespace {

CombMap make(int edges, std::vector<std::vector<int>> faces, std::vector<std::vector<int>> contours = {}) {
  CombMap m;
  m.num_edges = edges;
  m.faces = std::move(faces);
  for (auto& c : contours) m.contours.push_back(Contour{std::move(c), -1});
  m.rebuild_vertices();
  return m;
}

// Tetrahedron on vertices 0..3, edges 01 02 03 12 13 23 (ids 1..6).
CombMap tetrahedron() {
  return make(6, {{1, 4, -2}, {2, 6, -3}, {3, -5, -1}, {-4, 5, -6}});
}

CombMap torus() { return make(2, {{1, 2, -1, -2}}); }
CombMap projective_plane() { return make(1, {{1, 1}}); }
CombMap klein() { return make(2, {{1, 2, -1, 2}}); }

// Independent vertex count: walk the link permutation directly.
int oracle_vertices(const CombMap& m) {
  // the link graph joins the head of P[i] to the tail of P[i+1] at each corner
  std::vector<std::set<int>> adj(static_cast<std::size_t>(2 * m.num_edges));
  for (int p = 0; p < m.num_polygons(); ++p) {
    const auto& poly = m.polygon(p);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      int x = head_end(poly[i]), y = tail_end(poly[(i + 1) % poly.size()]);
      adj[static_cast<std::size_t>(x)].insert(y);
      adj[static_cast<std::size_t>(y)].insert(x);
    }
  }
  std::vector<char> seen(adj.size(), 0);
  int count = 0;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::vector<int> stack{static_cast<int>(s)};
    seen[s] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : adj[static_cast<std::size_t>(x)])
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          stack.push_back(y);
        }
    }
  }
  for (const auto& c : m.contours)
    if (c.sides.empty()) ++count;
  return count;
}

// Random closed map: glue a random pairing of polygon sides.
CombMap random_closed(std::mt19937& rng, int polys, int max_len) {
  std::vector<int> lens;
  int total = 0;
  for (int i = 0; i < polys; ++i) {
    int l = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_len));
    lens.push_back(l);
    total += l;
  }
  if (total % 2) {
    ++lens.back();
    ++total;
  }
  std::vector<int> darts;
  for (int e = 0; e < total / 2; ++e) {
    darts.push_back(make_dart(e, rng() % 2 ? 1 : -1));
    darts.push_back(make_dart(e, rng() % 2 ? 1 : -1));
  }
  std::shuffle(darts.begin(), darts.end(), rng);
  CombMap m;
  m.num_edges = total / 2;
  std::size_t at = 0;
  for (int l : lens) {
    m.faces.emplace_back(darts.begin() + static_cast<long>(at), darts.begin() + static_cast<long>(at + static_cast<std::size_t>(l)));
    at += static_cast<std::size_t>(l);
  }
  m.rebuild_vertices();
  return m;
}

}  // namespace

TEST_CASE("tetrahedron is a sphere") {
  auto m = tetrahedron();
  CHECK_FALSE(validate(m));
  CHECK(m.num_vertices == 4);
  CHECK(euler_characteristic(m) == 2);
  auto c = classify_closed(m);
  CHECK(c.orientable);
  CHECK(c.genus == 0);
  CHECK(c.name == "sphere");
  CHECK(m.tail(1) == m.tail(2));
  CHECK(m.head(1) == m.tail(4));
}

TEST_CASE("small closed surfaces") {
  auto t = classify_closed(torus());
  CHECK(t.name == "torus");
  CHECK(t.euler == 0);
  auto p = classify_closed(projective_plane());
  CHECK(p.name == "projective-plane");
  CHECK(p.genus == 1);
  CHECK(p.euler == 1);
  auto k = classify_closed(klein());
  CHECK(k.name == "klein-bottle");
  CHECK(k.euler == 0);
  auto o = orient(klein());
  CHECK_FALSE(o.orientable);
  CHECK_FALSE(o.odd_cycle.empty());
  auto g2 = make(4, {{1, 2, -1, -2, 3, 4, -3, -4}});
  CHECK(classify_closed(g2).name == "higher");
  CHECK(classify_closed(g2).genus == 2);
}

TEST_CASE("disc with one face") {
  auto m = make(3, {{-3, -2, -1}}, {{1, 2, 3}});
  CHECK_FALSE(validate(m));
  CHECK(m.num_vertices == 3);
  CHECK(euler_characteristic(m) == 1);
  CHECK(is_orientable(m));
  auto c = closure(m);
  CHECK(euler_characteristic(c) == 2);
  CHECK(classify_closed(c).name == "sphere");
  CHECK_THROWS_AS(classify_closed(m), std::invalid_argument);
}

TEST_CASE("validation messages") {
  auto over = make(2, {{1, 1, 2}, {-2, 1}});
  REQUIRE(validate(over));
  CHECK(validate(over)->find("overused") != std::string::npos);
  auto under = make(2, {{1, -1}});
  REQUIRE(validate(under));
  CHECK(validate(under)->find("unused") != std::string::npos);
  auto bad = make(1, {{1, 3}});
  CHECK(validate(bad));
}

TEST_CASE("components and trivial contours") {
  CombMap m;
  m.num_edges = 4;
  m.faces = {{1, 2, -1, -2}, {-4, -3}};
  m.contours = {Contour{{3, 4}, -1}, Contour{{}, -1}};
  m.rebuild_vertices();
  CHECK_FALSE(validate(m));
  auto comps = components(m);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0].map.num_edges == 2);
  CHECK(comps[1].map.num_edges == 2);
  CHECK(comps[1].contours == std::vector<int>{0});
  CHECK(comps[2].map.num_edges == 0);
  CHECK(comps[2].map.num_vertices == 1);
  long sum = 0;
  for (const auto& c : comps) sum += euler_characteristic(c.map);
  CHECK(sum == euler_characteristic(m));
  CHECK(m.contours[1].vertex == m.num_vertices - 1);
}

TEST_CASE("submap of every face reproduces the map") {
  auto m = make(3, {{-3, -2, -1}}, {{1, 2, 3}});
  auto s = submap(m, {0});
  CHECK(s.map.faces == m.faces);
  REQUIRE(s.map.contours.size() == 1);
  CHECK(s.map.contours[0].sides == m.contours[0].sides);
  CHECK(s.contours == std::vector<int>{0});
}

TEST_CASE("submap of one tetrahedron face is a disc") {
  auto m = tetrahedron();
  for (int f = 0; f < 4; ++f) {
    auto s = submap(m, {f});
    CHECK_FALSE(validate(s.map));
    CHECK(s.map.num_faces() == 1);
    REQUIRE(s.map.num_contours() == 1);
    CHECK(s.map.contours[0].sides.size() == 3);
    CHECK(euler_characteristic(s.map) == 1);
    // contour reads the face backwards
    auto face = s.map.faces[0];
    auto cont = s.map.contours[0].sides;
    std::vector<int> inv;
    for (auto it = face.rbegin(); it != face.rend(); ++it) inv.push_back(-*it);
    bool rotation = false;
    for (std::size_t r = 0; r < 3; ++r) {
      std::vector<int> rot(inv.begin() + static_cast<long>(r), inv.end());
      rot.insert(rot.end(), inv.begin(), inv.begin() + static_cast<long>(r));
      rotation = rotation || rot == cont;
    }
    CHECK(rotation);
  }
  auto three = submap(m, {0, 1, 2});
  CHECK_FALSE(validate(three.map));
  CHECK(euler_characteristic(three.map) == 1);
  auto edge_only = submap(m, {}, {0}, {3});
  CHECK_FALSE(validate(edge_only.map));
  CHECK(edge_only.map.num_faces() == 0);
  CHECK(edge_only.map.num_vertices == 3);
  CHECK(euler_characteristic(edge_only.map) == 2);
}

TEST_CASE("random closed maps: vertex oracle, components, submaps") {
  std::mt19937 rng(7);
  int checked = 0;
  for (int iter = 0; iter < 300; ++iter) {
    auto m = random_closed(rng, 1 + static_cast<int>(rng() % 5), 5);
    REQUIRE_FALSE(validate(m));
    CHECK(m.num_vertices == oracle_vertices(m));
    auto comps = components(m);
    long sum = 0;
    for (const auto& c : comps) {
      CHECK_FALSE(validate(c.map));
      sum += euler_characteristic(c.map);
      auto cls = classify_closed(c.map);
      CHECK(cls.euler <= 2);
      if (cls.orientable) CHECK(cls.euler % 2 == 0);
    }
    CHECK(sum == euler_characteristic(m));
    // every face subset: valid submap with a contour side for each cut edge
    const int F = m.num_faces();
    for (int mask = 1; mask < (1 << F); ++mask) {
      std::vector<int> fs;
      for (int f = 0; f < F; ++f)
        if (mask >> f & 1) fs.push_back(f);
      auto s = submap(m, fs);
      REQUIRE_FALSE(validate(s.map));
      CHECK(s.map.num_vertices == oracle_vertices(s.map));
      CHECK(euler_characteristic(closure(s.map)) ==
            euler_characteristic(s.map) + s.map.num_contours());
      ++checked;
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("proper subcomplexes of a sphere have euler characteristic at most one per component") {
  auto m = tetrahedron();
  for (int mask = 1; mask < 15; ++mask) {
    std::vector<int> fs;
    for (int f = 0; f < 4; ++f)
      if (mask >> f & 1) fs.push_back(f);
    auto s = submap(m, fs);
    for (const auto& c : components(s.map)) CHECK(euler_characteristic(c.map) <= 1);
  }
}
