#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>

#include "oracles.hpp"
#include "smap_props.hpp"
#include "toy_corpus.hpp"
#include "vkd/matching.hpp"

using namespace vkd;

namespace {

const RelatorLayouts& toy_rel() {
  static const RelatorLayouts rel = toy_family();
  return rel;
}

const Weights& toy_weights() {
  static const Weights w = measure_weights(toy_rel());
  return w;
}

toy::Disc glued(int n, const std::string& kind) {
  const auto& rel = toy_rel();
  for (const auto& g : toy::catalog(rel, n, n))
    if (g.kind == kind) {
      toy::Disc out;
      if (toy::attach(rel, toy::single(rel, n), 0, n, g, out)) return out;
    }
  throw std::runtime_error("no gluing " + kind);
}

std::vector<int> all_faces(const SMap& s) {
  std::vector<int> v(s.face.size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

FaceSel plain_sel(const std::vector<int>& reading, int index, bool selected) {
  FaceSel fs;
  fs.index = index;
  fs.reading = reading;
  fs.sel.assign(reading.size(), selected);
  fs.link.assign(reading.size(), 0);
  fs.tag.assign(reading.size(), -1);
  return fs;
}

}  // namespace

TEST_CASE("toy family weights") {
  const auto& rel = toy_rel();
  const auto& w = toy_weights();
  REQUIRE(rel.size() == 2);
  CHECK(rel.at(1).k == 4);
  CHECK(rel.at(2).k == 5);
  for (const auto& [n, r] : rel) {
    const auto len = static_cast<long long>(r.word.size());
    long long outside = 0;
    for (long long p = 0; p < len; ++p) {
      auto b = r.locate(p);
      if (b.kind != BlockRef::u_block && b.kind != BlockRef::u_inverse) ++outside;
    }
    CHECK(w.lambda.at(n) == Rational(outside, len));
    CHECK(w.nu.at(n) == Rational(r.u_len, len));
    CHECK(index_gamma(w, n, r.k) < Rational(1, 2));
  }
  // mu from a suffix automaton over the positive blocks
  std::map<int, std::vector<GroupWord>> blocks;
  for (const auto& [n, r] : rel)
    for (int j = 1; j <= r.k; ++j) blocks[n].push_back(r.u_block(j));
  for (const auto& [n, r] : rel) {
    auto own = oracle::symbols(blocks[n]);
    oracle::SuffixAutomaton self(own.size());
    for (int c : own) self.extend(c);
    std::int64_t best = self.longest_repeat(own);
    for (const auto& [m, list] : blocks) {
      if (m == n) continue;
      auto other = oracle::symbols(list);
      oracle::SuffixAutomaton sa(other.size());
      for (int c : other) sa.extend(c);
      best = std::max(best, sa.longest_common(own));
    }
    CHECK(w.mu.at(n) == Rational(best, static_cast<long long>(r.word.size())));
  }
  CHECK(w.mu.at(1) == Rational(161, 12965));
  CHECK(w.nu.at(1) == Rational(324, 2593));
}

TEST_CASE("one-face disc") {
  const auto& rel = toy_rel();
  for (const auto& [n, r] : rel) {
    auto x = toy::single(rel, n);
    auto s = derive_smap(x.d, rel);
    CHECK(s.exceptional.empty());
    CHECK(selected_arcs(s).empty());
    auto [k, kp] = kappa(s, 0);
    CHECK(k == 2 * r.k);
    CHECK(kp <= k);
    CHECK(check_D(s, {0}, toy_weights()).status == CheckResult::holds);
    CHECK(check_D(s, {}, toy_weights()).status == CheckResult::holds);
    CHECK(check_Y(s, {0}).status == CheckResult::holds);
    auto l = lemma46_check(s, toy_weights());
    CHECK(l.status == CheckResult::holds);
    auto e = estimate_selected(s, {}, {0});
    CHECK(e.A.empty());
    CHECK(e.f.empty());
    CHECK(e.result.status == CheckResult::holds);
    CHECK(is_convenient(x.d, s));
  }
}

TEST_CASE("two faces along a whole u-block") {
  const auto& rel = toy_rel();
  auto x = glued(1, "u1");
  auto s = derive_smap(x.d, rel);
  REQUIRE(s.exceptional.size() == 1);
  CHECK(static_cast<std::int64_t>(s.exceptional[0].size()) == rel.at(1).u_len);
  CHECK(arc_index(s, s.exceptional[0]) == 1);
  CHECK(is_convenient(x.d, s));
  CHECK(check_Y(s, {0, 1}).status == CheckResult::holds);
  CHECK(check_D(s, {0, 1}, toy_weights()).status == CheckResult::holds);
  auto e = estimate_exceptional(s, {0, 1});
  CHECK(e.result.status == CheckResult::holds);
  CHECK(e.A.at(1) == 1);
  CHECK(e.B.at(1) == 2);
  CHECK(e.euler == 1);
  CHECK(e.delta.at(1) == 0);
  CHECK(e.A.at(1) <= 2 * e.B.at(1) - e.euler - e.delta.at(1));
  CHECK(e.E.empty());
  // the arc lies on the boundary of the one-face submap
  auto one = estimate_exceptional(s, {0});
  CHECK(one.A.at(1) == 0);
  CHECK(one.delta.at(1) == 1);
  CHECK(lemma46_check(s, toy_weights()).status == CheckResult::holds);
}

TEST_CASE("partial u-block gluing is exceptional but not convenient") {
  auto x = glued(1, "part");
  auto s = derive_smap(x.d, toy_rel());
  REQUIRE(s.exceptional.size() == 1);
  CHECK(static_cast<std::int64_t>(s.exceptional[0].size()) == toy_rel().at(1).u_len / 2);
  CHECK_FALSE(is_convenient(x.d, s));
}

TEST_CASE("pieces and single letters are not exceptional") {
  const auto& rel = toy_rel();
  for (const auto& g : toy::catalog(rel, 1, 2)) {
    toy::Disc x;
    REQUIRE(toy::attach(rel, toy::single(rel, 1), 0, 2, g, x));
    auto s = derive_smap(x.d, rel);
    CHECK(s.exceptional.empty());
    CHECK(check_D(s, {0, 1}, toy_weights()).status == CheckResult::holds);
  }
}

TEST_CASE("sabotaged weights") {
  auto x = toy::single(toy_rel(), 1);
  auto s = derive_smap(x.d, toy_rel());
  Weights w = toy_weights();
  w.lambda[1] = 0;
  auto d = check_D(s, {0}, w);
  CHECK(d.name == "D1");
  CHECK(d.status == CheckResult::violated);
  auto l = lemma46_check(s, w);
  CHECK(l.status == CheckResult::hypothesis_failed);
  CHECK(l.witness.rfind("D1-violated", 0) == 0);
  Weights none;
  CHECK_THROWS(check_D(s, {0}, none));
}

TEST_CASE("closure of an annulus") {
  Diagram d;
  d.map.num_edges = 2;
  d.edge_label = {0, 0};
  d.map.contours = {Contour{{1, 2}, -1}, Contour{{-2, -1}, -1}};
  d.map.rebuild_vertices();
  auto s = derive_smap(d, toy_rel(), true);
  REQUIRE(s.face.size() == 2);
  CHECK(s.face[0].index == -1);
  CHECK(kappa(s, 0) == std::make_pair(0, 0));
  CHECK(kappa(s, 1) == std::make_pair(0, 0));
  auto z = check_Z2(s, {0});
  CHECK(z.status == CheckResult::violated);
  CHECK(props::z2_violated_oracle(s, {0}));
  auto e = estimate_selected(s, {}, {});
  CHECK(e.result.status == CheckResult::hypothesis_failed);
  CHECK(e.result.witness == "bad-elementary-sphere");
  CHECK(lemma46_check(s, toy_weights()).status == CheckResult::hypothesis_failed);
  // a relator contour is not a z-concatenation
  CHECK_THROWS_AS(derive_smap(toy::single(toy_rel(), 1).d, toy_rel(), true), std::invalid_argument);
}

TEST_CASE("Z2 against the quadratic oracle") {
  std::mt19937 rng(404);
  int holds = 0, violated = 0;
  for (int iter = 0; iter < 600; ++iter) {
    int L = 1 + static_cast<int>(rng() % 20);
    int caps = 1 + static_cast<int>(rng() % std::min(L, 4));
    auto w = props::random_wheel(rng, L, caps, 60 + static_cast<int>(rng() % 41));
    REQUIRE(!validate(w.s.map));
    std::vector<int> phi{0};
    if (caps > 1 && rng() % 3 == 0) phi.push_back(1 + static_cast<int>(rng() % static_cast<unsigned>(caps)));
    REQUIRE(is_simple_disc(w.s.map, phi));
    REQUIRE(boundary_darts(w.s.map, phi).size() <= 20);
    auto z = check_Z2(w.s, phi);
    bool oracle = props::z2_violated_oracle(w.s, phi);
    CHECK((z.status == CheckResult::violated) == oracle);
    (oracle ? violated : holds) += 1;
  }
  CHECK(holds > 50);
  CHECK(violated > 50);
}

TEST_CASE("Z2 needs a simple disc") {
  std::mt19937 rng(7);
  auto w = props::random_wheel(rng, 6, 2, 100);
  CHECK(check_Z2(w.s, {1, 2}).status == CheckResult::hypothesis_failed);
  CHECK(check_Z2(w.s, {}).status == CheckResult::hypothesis_failed);
  // a boundary edge on no outside face blocks every decomposition
  CHECK(check_Z2(w.s, {0, 1}).status == CheckResult::holds);
}

TEST_CASE("condition Y violated by two disc components") {
  SMap s;
  s.map.num_edges = 3;
  s.map.faces = {{1, 2, -1, 3}, {-2}, {-3}};
  s.map.rebuild_vertices();
  REQUIRE(!validate(s.map));
  s.face.push_back(plain_sel({1, 2, -1, 3}, 1, false));
  s.face[0].sel[0] = s.face[0].sel[2] = 1;
  s.face.push_back(plain_sel({-2}, 2, false));
  s.face.push_back(plain_sel({-3}, 2, false));
  s.exceptional = {{1}};
  auto y = check_Y(s, {0, 1, 2});
  CHECK(format_check(y) == "CHECK Y violated index=1 components=2 faces=1");
  auto e = estimate_exceptional(s, {0, 1, 2});
  CHECK(e.result.status == CheckResult::hypothesis_failed);
  CHECK(format_check(e.result) == "CHECK exceptional-arcs hypothesis-failed Y-violated index=1 components=2 faces=1");
  CHECK(check_Y(s, {1}).status == CheckResult::holds);
  CHECK(check_Y(s, {1, 2}).status == CheckResult::hypothesis_failed);
}

TEST_CASE("selected-arc assignment against exhaustive search") {
  std::mt19937 rng(99);
  int certified = 0, refused = 0;
  for (int iter = 0; iter < 300; ++iter) {
    int L = 3 + static_cast<int>(rng() % 10);
    int caps = 1 + static_cast<int>(rng() % std::min(L, 4));
    auto w = props::random_wheel(rng, L, caps, 70);
    const SMap& s = w.s;
    const int F = static_cast<int>(s.face.size());
    auto A = selected_arcs(s);
    if (A.empty() || A.size() > 6) continue;
    std::vector<int> C, D;
    for (int f = 0; f < F; ++f) {
      if (rng() % 2) C.push_back(f);
      if (rng() % 3) D.push_back(f);
    }
    auto e = estimate_selected(s, C, D);
    if (e.result.status == CheckResult::hypothesis_failed) continue;
    REQUIRE(e.A.size() == A.size());
    // incidence and capacities recomputed from the face readings
    std::vector<std::vector<int>> inc(A.size());
    for (std::size_t a = 0; a < A.size(); ++a)
      for (int f = 0; f < F; ++f)
        for (int d : s.face[static_cast<std::size_t>(f)].reading)
          if (dart_edge(d) == dart_edge(A[a][0]) &&
              std::find(inc[a].begin(), inc[a].end(), f) == inc[a].end())
            inc[a].push_back(f);
    auto in = [](const std::vector<int>& v, int f) { return std::find(v.begin(), v.end(), f) != v.end(); };
    std::vector<char> inB(static_cast<std::size_t>(F), 0);
    for (const auto& l : inc)
      for (int f : l) inB[static_cast<std::size_t>(f)] = 1;
    const long chi = euler_characteristic(s.map);
    long bound = -3 * chi - 1, e_bound = -3 * chi - 1;
    std::vector<long> cap(static_cast<std::size_t>(F), 0);
    for (int f = 0; f < F; ++f) {
      auto [k, kp] = kappa(s, f);
      bool b = inB[static_cast<std::size_t>(f)];
      if (b) bound += 3 + k + kp;
      if (!b && in(C, f)) bound += 2;
      if (b && !in(D, f)) e_bound += 3 + k + kp;
      if (in(C, f) && !(b && !in(D, f))) e_bound += 2;
      if (in(D, f)) cap[static_cast<std::size_t>(f)] = (in(C, f) ? 1 : 3) + k + kp;
    }
    CHECK(e.bound == bound);
    CHECK(e.e_bound == e_bound);
    if (static_cast<long>(A.size()) > bound) {
      CHECK(e.result.status == CheckResult::violated);
      continue;
    }
    // exhaustive assignment: each arc to an incident face of D or to E
    std::vector<long> used(static_cast<std::size_t>(F), 0);
    long used_e = 0;
    std::function<bool(std::size_t)> search = [&](std::size_t a) {
      if (a == A.size()) return true;
      for (int f : inc[a])
        if (in(D, f) && used[static_cast<std::size_t>(f)] < cap[static_cast<std::size_t>(f)]) {
          ++used[static_cast<std::size_t>(f)];
          bool ok = search(a + 1);
          --used[static_cast<std::size_t>(f)];
          if (ok) return true;
        }
      if (used_e < std::max(0L, e_bound)) {
        ++used_e;
        bool ok = search(a + 1);
        --used_e;
        if (ok) return true;
      }
      return false;
    };
    bool feasible = search(0);
    CHECK((e.result.status == CheckResult::holds) == feasible);
    if (!feasible) {
      ++refused;
      continue;
    }
    ++certified;
    REQUIRE(e.f.size() == A.size());
    std::vector<long> got(static_cast<std::size_t>(F), 0);
    long got_e = 0;
    for (std::size_t a = 0; a < A.size(); ++a) {
      int f = e.f[a];
      if (f < 0) {
        ++got_e;
        continue;
      }
      CHECK(in(D, f));
      CHECK(in(inc[a], f));
      ++got[static_cast<std::size_t>(f)];
    }
    CHECK(got_e <= std::max(0L, e_bound));
    for (int f = 0; f < F; ++f) CHECK(got[static_cast<std::size_t>(f)] <= cap[static_cast<std::size_t>(f)]);
  }
  CHECK(certified > 10);
  // the estimate guarantees an assignment whenever its hypotheses hold
  CHECK(refused == 0);
}

TEST_CASE("kappa on hand-made selections") {
  SMap s;
  s.map.num_edges = 4;
  s.map.faces = {{1, 2, 3, 4}};
  s.map.contours = {Contour{{-4, -3, -2, -1}, -1}};
  s.map.rebuild_vertices();
  s.face.push_back(plain_sel({1, 2, 3, 4}, 1, false));
  CHECK(kappa(s, 0) == std::make_pair(0, 0));
  s.face[0].sel = {1, 0, 1, 0};
  CHECK(kappa(s, 0) == std::make_pair(2, 2));
  s.face[0].sel = {1, 1, 0, 0};
  CHECK(kappa(s, 0) == std::make_pair(2, 1));  // the unlinked corner between edges 1 and 2
  s.face[0].link = {1, 0, 0, 0};
  CHECK(kappa(s, 0) == std::make_pair(1, 1));
  s.face[0].sel = {1, 1, 1, 1};
  s.face[0].link = {1, 1, 1, 1};
  CHECK(kappa(s, 0) == std::make_pair(0, 0));
}

TEST_CASE("toy corpus sweep") {
  const auto& rel = toy_rel();
  const auto& w = toy_weights();
  auto corpus = toy::corpus(rel);
  auto table = relator_table(rel);
  int convenient = 0, inductive = 0, l44 = 0, l46 = 0, exceptional = 0;
  for (std::size_t i = 0; i < corpus.size(); i += 3) {
    const auto& x = corpus[i];
    REQUIRE_MESSAGE(!validate_diagram(x.d, table), x.name);
    auto s = derive_smap(x.d, rel);
    for (int f = 0; f < static_cast<int>(s.face.size()); ++f) {
      auto [k, kp] = kappa(s, f);
      CHECK(kp <= k);
      CHECK(k == 2 * rel.at(s.face[static_cast<std::size_t>(f)].index).k);
    }
    if (!is_convenient(x.d, s)) continue;
    ++convenient;
    exceptional += static_cast<int>(s.exceptional.size());
    CHECK_MESSAGE(check_D(s, all_faces(s), w).status == CheckResult::holds, x.name);
    CHECK_MESSAGE(check_Y(s, all_faces(s)).status == CheckResult::holds, x.name);
    auto l = lemma46_check(s, w);
    CHECK_MESSAGE(l.status == CheckResult::holds, x.name, " ", format_check(l));
    l46 += l.status == CheckResult::holds;
    l44 += props::lemma44_violations(s);
    inductive += props::inductive_violations(s, w);
  }
  CHECK(convenient > 40);
  CHECK(exceptional > 0);
  CHECK(l44 == 0);
  CHECK(inductive == 0);
  CHECK(l46 == convenient);
}
