#pragma once

// Random labeled gluings used by the diagram tests and the acceptance run.

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "vkd/diagram.hpp"

namespace gen {

struct Options {
  int faces = 3;
  bool augmented = false;  // mix in 0-faces and 1-faces
  int max_contours = 2;
  int free_sides = 2;      // extra sides routed to contours instead of glued
  bool zero_contour = false;  // add a contour made only of 0-edges
};

inline int pick(std::mt19937& rng, int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

inline vkd::Diagram random_diagram(std::mt19937& rng, const vkd::RelatorTable& rel, const Options& opt) {
  using namespace vkd;
  struct Side {
    int poly, pos, code;
  };
  std::vector<std::vector<int>> codes;
  Diagram d;
  std::vector<int> rel_ids;
  for (const auto& [k, w] : rel) rel_ids.push_back(k);
  for (int f = 0; f < opt.faces; ++f) {
    int kind = opt.augmented ? pick(rng, 4) : 2;
    if (kind == 3 || rel_ids.empty()) kind = rel_ids.empty() ? 1 : 2;
    std::vector<int> c;
    FaceLabel lab;
    FaceClass cls = static_cast<FaceClass>(kind);
    if (kind == 2) {
      lab.relator = rel_ids[static_cast<std::size_t>(pick(rng, static_cast<int>(rel_ids.size())))];
      lab.orient = pick(rng, 2) ? 1 : -1;
      GroupWord w = rel.at(lab.relator);
      if (lab.orient < 0) w = inverse(w);
      const int n = static_cast<int>(w.size());
      lab.start = pick(rng, n);
      c.assign(static_cast<std::size_t>(n), 0);
      for (int i = 0; i < n; ++i) c[static_cast<std::size_t>((lab.start + i) % n)] = w[static_cast<std::size_t>(i)].code;
    } else if (kind == 0) {
      c.assign(static_cast<std::size_t>(1 + pick(rng, 3)), kOne);
    } else {
      int x = pick(rng, 4);
      c.push_back(x);
      for (int i = pick(rng, 3); i > 0; --i) c.push_back(kOne);
      c.push_back(x ^ 2);
      for (int i = pick(rng, 3); i > 0; --i) c.push_back(kOne);
      std::rotate(c.begin(), c.begin() + pick(rng, static_cast<int>(c.size())), c.end());
    }
    codes.push_back(c);
    d.face_label.push_back(lab);
    d.face_class.push_back(cls);
  }
  std::map<int, std::vector<Side>> groups;
  for (int p = 0; p < static_cast<int>(codes.size()); ++p)
    for (int i = 0; i < static_cast<int>(codes[static_cast<std::size_t>(p)].size()); ++i) {
      int c = codes[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)];
      groups[c == kOne ? 4 : (c & 1)].push_back({p, i, c});
    }
  std::vector<std::vector<int>> polys(codes.size());
  for (std::size_t p = 0; p < codes.size(); ++p) polys[p].assign(codes[p].size(), 0);
  std::vector<int> loose;  // darts owed to contours
  auto new_edge = [&](int code) {
    d.edge_label.push_back(code);
    return ++d.map.num_edges;
  };
  int budget = opt.free_sides;
  for (auto& [key, sides] : groups) {
    std::shuffle(sides.begin(), sides.end(), rng);
    std::size_t i = 0;
    while (i < sides.size()) {
      const Side s = sides[i];
      bool glue = i + 1 < sides.size() && !(budget > 0 && pick(rng, 3) == 0);
      int e = new_edge(s.code);
      polys[static_cast<std::size_t>(s.poly)][static_cast<std::size_t>(s.pos)] = e;
      if (glue) {
        const Side t = sides[i + 1];
        int dart = t.code == kOne ? (pick(rng, 2) ? e : -e) : (t.code == s.code ? e : -e);
        polys[static_cast<std::size_t>(t.poly)][static_cast<std::size_t>(t.pos)] = dart;
        i += 2;
      } else {
        if (i + 1 < sides.size()) --budget;
        loose.push_back(pick(rng, 2) ? e : -e);
        i += 1;
      }
    }
  }
  for (std::size_t p = 0; p < polys.size(); ++p) d.map.faces.push_back(polys[p]);
  std::shuffle(loose.begin(), loose.end(), rng);
  int parts = std::min<int>(static_cast<int>(loose.size()), 1 + pick(rng, std::max(1, opt.max_contours)));
  if (!loose.empty()) {
    std::vector<std::size_t> cuts{0};
    for (int k = 1; k < parts; ++k) cuts.push_back(static_cast<std::size_t>(pick(rng, static_cast<int>(loose.size()))));
    cuts.push_back(loose.size());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      d.map.contours.push_back(Contour{std::vector<int>(loose.begin() + static_cast<long>(cuts[k]),
                                                        loose.begin() + static_cast<long>(cuts[k + 1])),
                                       -1});
  }
  if (opt.zero_contour && opt.augmented) {
    // a 0-face whose whole boundary is a contour of its own
    int n = 1 + pick(rng, 3);
    std::vector<int> face, cont;
    for (int i = 0; i < n; ++i) {
      int e = new_edge(kOne);
      face.push_back(-e);
      cont.push_back(e);
    }
    std::reverse(face.begin(), face.end());
    d.map.faces.push_back(face);
    d.face_label.push_back(FaceLabel{});
    d.face_class.push_back(FaceClass::zero);
    d.map.contours.push_back(Contour{cont, -1});
  }
  d.map.rebuild_vertices();
  return d;
}

}  // namespace gen
