#include "vkd/solver.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace vkd {

namespace {

std::size_t sz(long i) { return static_cast<std::size_t>(i); }

// ---------------------------------------------------------------- diagram surgery

int new_edge(Diagram& d, Letter l) {
  d.edge_label.push_back(l.code);
  return ++d.map.num_edges;
}

// Smallest start and the orientation under which `poly` spells relator r.
FaceLabel label_face(const Diagram& d, const std::vector<int>& poly, int id, const GroupWord& r) {
  GroupWord w;
  for (int x : poly) w.push_back(Letter::from_code(d.dart_label(x)));
  if (auto k = rotation_offset(r, w)) return FaceLabel{id, 1, static_cast<std::int64_t>(*k)};
  if (auto k = rotation_offset(inverse(r), w)) return FaceLabel{id, -1, static_cast<std::int64_t>(*k)};
  throw std::logic_error("face does not spell its relator");
}

// Darts spelling w, given darts u spelling the free reduction of w; the
// cancelled pairs become new edges.
std::vector<int> expand_darts(Diagram& d, const std::vector<int>& u, const GroupWord& w) {
  const std::size_t n = w.size();
  std::vector<long> partner(n, -1);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (!stack.empty() && w[stack.back()] == w[i].inv()) {
      partner[i] = static_cast<long>(stack.back());
      partner[stack.back()] = static_cast<long>(i);
      stack.pop_back();
    } else {
      stack.push_back(i);
    }
  }
  if (stack.size() != u.size()) throw std::logic_error("free reduction does not match the darts");
  std::vector<int> out;
  std::vector<int> dart(n, 0);
  std::size_t next_kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (partner[i] < 0) {
      dart[i] = u[next_kept++];
    } else if (static_cast<std::size_t>(partner[i]) > i) {
      dart[i] = new_edge(d, w[i]);
    } else {
      dart[i] = -dart[sz(partner[i])];
    }
    out.push_back(dart[i]);
  }
  return out;
}

// Contour c reads x; make it read w, where w freely reduces to p x p^-1 and
// p x p^-1 is reduced up to the cancellation inside w.
void expand_contour(Diagram& d, int c, const GroupWord& conj, const GroupWord& w) {
  auto& sides = d.map.contours[sz(c)].sides;
  std::vector<int> stem;
  for (Letter l : conj) stem.push_back(new_edge(d, l));
  std::vector<int> u = stem;
  u.insert(u.end(), sides.begin(), sides.end());
  for (auto it = stem.rbegin(); it != stem.rend(); ++it) u.push_back(-*it);
  d.map.contours[sz(c)].sides = expand_darts(d, u, w);
}

// Contour c starts with sides reading t^-1; attach a face reading (t s)^-1 so
// that the contour reads s in their place.
// r is a cyclic core; when `full` is given the face reads full instead, whose
// cyclic reduction is r, with the cancelled parts hanging inside the face.
void attach_face(Diagram& d, int c, std::size_t t_len, const GroupWord& s, int id, const GroupWord& r,
                 const GroupWord& full = {}) {
  auto& sides = d.map.contours[sz(c)].sides;
  std::vector<int> sd;
  for (Letter l : s) sd.push_back(new_edge(d, l));
  std::vector<int> poly;
  for (auto it = sd.rbegin(); it != sd.rend(); ++it) poly.push_back(-*it);
  poly.insert(poly.end(), sides.begin(), sides.begin() + static_cast<long>(t_len));
  std::vector<int> rest(sides.begin() + static_cast<long>(t_len), sides.end());
  sides = sd;
  sides.insert(sides.end(), rest.begin(), rest.end());
  d.face_label.push_back(label_face(d, poly, id, r));
  d.face_class.push_back(FaceClass::two);
  d.map.faces.push_back(poly);
  if (full.empty() || full == r) return;
  const int f = d.map.num_faces() - 1;
  std::vector<int> stem;
  for (Letter l : cyclic_reduce(full).conjugator) stem.push_back(new_edge(d, l));
  std::vector<int> u = stem;
  for (int x : face_reading(d, f)) u.push_back(x);
  for (auto it = stem.rbegin(); it != stem.rend(); ++it) u.push_back(-*it);
  std::vector<int> reading = expand_darts(d, u, full);
  FaceLabel& lab = d.face_label.back();
  if (lab.orient < 0) {
    std::reverse(reading.begin(), reading.end());
    for (int& x : reading) x = -x;
  }
  lab.start = 0;
  d.map.faces.back() = reading;
}

// ---------------------------------------------------------------- cyclic matching

// Suffix automaton of r r (without its last letter): every cyclic subword of
// r of length at most |r| is a subword.
class CyclicIndex {
 public:
  explicit CyclicIndex(const GroupWord& r) : n_(static_cast<long>(r.size())) {
    const long len = 2 * n_ - 1;
    st_.reserve(sz(2 * len + 2));
    st_.push_back(State{});
    for (long i = 0; i < len; ++i) extend(r[sz(i % n_)].code, i);
  }

  struct Hit {
    long start = 0;  // in the text
    long len = 0;
    long rel_start = 0;  // in r
  };

  // Maximal cyclic subwords of c of length > |r|/2 shared with r.
  std::vector<Hit> hits(const GroupWord& c) const {
    const long m = static_cast<long>(c.size());
    std::vector<Hit> out;
    if (2 * std::min(m, n_) <= n_) return out;
    const long len = 2 * m - 1;
    std::vector<long> ml(sz(len));
    std::vector<int> state(sz(len));
    int v = 0;
    long l = 0;
    for (long j = 0; j < len; ++j) {
      int ch = c[sz(j % m)].code;
      while (v != 0 && st_[sz(v)].next[ch] < 0) {
        v = st_[sz(v)].link;
        l = st_[sz(v)].len;
      }
      if (st_[sz(v)].next[ch] >= 0) {
        v = st_[sz(v)].next[ch];
        ++l;
      }
      ml[sz(j)] = l;
      state[sz(j)] = v;
    }
    bool full = false;
    for (long j = 0; j < len; ++j) {
      bool right_max = j + 1 == len || ml[sz(j + 1)] <= ml[sz(j)];
      long ell = std::min({ml[sz(j)], m, n_});
      if (ell < ml[sz(j)]) right_max = true;
      if (!right_max || 2 * ell <= n_) continue;
      long start = j - ell + 1;
      if (start < 0 || start >= m) continue;
      if (ell == m) {
        if (full) continue;
        full = true;
      }
      long end = st_[sz(state[sz(j)])].first;
      out.push_back(Hit{start, ell, ((end - ell + 1) % n_ + n_) % n_});
    }
    return out;
  }

 private:
  struct State {
    int len = 0;
    int link = -1;
    int first = -1;
    int next[4] = {-1, -1, -1, -1};
  };

  void extend(int c, long pos) {
    int cur = static_cast<int>(st_.size());
    st_.push_back(State{});
    st_[sz(cur)].len = st_[sz(last_)].len + 1;
    st_[sz(cur)].first = static_cast<int>(pos);
    int p = last_;
    while (p != -1 && st_[sz(p)].next[c] == -1) {
      st_[sz(p)].next[c] = cur;
      p = st_[sz(p)].link;
    }
    if (p == -1) {
      st_[sz(cur)].link = 0;
    } else {
      int q = st_[sz(p)].next[c];
      if (st_[sz(p)].len + 1 == st_[sz(q)].len) {
        st_[sz(cur)].link = q;
      } else {
        int clone = static_cast<int>(st_.size());
        State cl = st_[sz(q)];
        cl.len = st_[sz(p)].len + 1;
        st_.push_back(cl);
        while (p != -1 && st_[sz(p)].next[c] == q) {
          st_[sz(p)].next[c] = clone;
          p = st_[sz(p)].link;
        }
        st_[sz(q)].link = clone;
        st_[sz(cur)].link = clone;
      }
    }
    last_ = cur;
  }

  long n_;
  std::vector<State> st_;
  int last_ = 0;
};

// ---------------------------------------------------------------- face removal search

// c rotated by `offset` is s y with s t a rotation of r^sign; the next word is
// the cyclic core of t^-1 y.
struct Step {
  GroupWord before;
  long offset = 0;
  long len = 0;
  int id = 0;
  int sign = 1;
  long rel_start = 0;
};

struct Removal {
  GroupWord s, t, y, u;
};

Removal removal(const Step& st, const GroupWord& r) {
  Removal out;
  GroupWord R = st.sign > 0 ? r : inverse(r);
  GroupWord rr = rotate(R, sz(st.rel_start));
  GroupWord cr = rotate(st.before, sz(st.offset));
  out.s.assign(rr.begin(), rr.begin() + st.len);
  out.t.assign(rr.begin() + st.len, rr.end());
  out.y.assign(cr.begin() + st.len, cr.end());
  out.u = concat(inverse(out.t), out.y);
  return out;
}

class FaceSearch {
 public:
  FaceSearch(const Subpresentation& sub, long node_cap) : sub_(sub), node_cap_(node_cap) {}

  // Words reachable from c (cyclically reduced) by removing faces within the
  // budget; calls `visit` on each with its path, stops when visit returns true.
  template <class Visit>
  bool run(const GroupWord& c, const Rational& budget, Visit&& visit) {
    std::vector<Step> path;
    return dfs(c, budget, path, visit);
  }

  bool exhausted() const { return nodes_ > node_cap_; }

 private:
  template <class Visit>
  bool dfs(const GroupWord& c, const Rational& budget, std::vector<Step>& path, Visit& visit) {
    if (++nodes_ > node_cap_) return false;
    GroupWord key = min_rotation(c);
    auto it = seen_.find(key);
    if (it != seen_.end() && it->second >= budget) return false;
    seen_[key] = budget;
    if (visit(c, path, budget)) return true;
    if (c.empty()) return false;
    struct Cand {
      Step step;
      Rational w;
    };
    std::vector<Cand> cands;
    const GroupWord cinv = inverse(c);
    const long m = static_cast<long>(c.size());
    for (const auto& [id, r] : sub_.relators) {
      const Rational& w = sub_.weight.at(id);
      if (w > budget) continue;
      const long n = static_cast<long>(r.size());
      if (n == 0 || 2 * std::min(m, n) <= n) continue;
      const CyclicIndex& idx = index(id, r);
      for (const auto& h : idx.hits(c)) cands.push_back({Step{c, h.start, h.len, id, 1, h.rel_start}, w});
      for (const auto& h : idx.hits(cinv)) {
        long off = ((m - h.start - h.len) % m + m) % m;
        long rs = ((n - h.rel_start - h.len) % n + n) % n;
        cands.push_back({Step{c, off, h.len, id, -1, rs}, w});
      }
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) { return a.step.len > b.step.len; });
    for (const auto& cand : cands) {
      Removal rm = removal(cand.step, sub_.relators.at(cand.step.id));
      GroupWord next = cyclic_core(rm.u);
      path.push_back(cand.step);
      if (dfs(next, budget - cand.w, path, visit)) return true;
      path.pop_back();
      if (nodes_ > node_cap_) return false;
    }
    return false;
  }

  const CyclicIndex& index(int id, const GroupWord& r) {
    auto it = index_.find(id);
    if (it == index_.end()) it = index_.emplace(id, std::make_unique<CyclicIndex>(r)).first;
    return *it->second;
  }

  const Subpresentation& sub_;
  long node_cap_;
  long nodes_ = 0;
  std::map<GroupWord, Rational> seen_;
  std::map<int, std::unique_ptr<CyclicIndex>> index_;
};

// Replay removals backwards on contour c, which currently reads the cyclic
// core reached by `path`; afterwards it reads `w`.
// Relators that fit a budget, replaced by their cyclic cores; full[id] is
// the relator itself.
struct Fitted {
  Subpresentation sub;
  std::map<int, GroupWord> full;
};

void replay(Diagram& d, int c, const Fitted& fit, const std::vector<Step>& path, const GroupWord& w) {
  const Subpresentation& sub = fit.sub;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const GroupWord& r = sub.relators.at(it->id);
    Removal rm = removal(*it, r);
    CyclicReduction cr = cyclic_reduce(free_reduce(rm.u));
    expand_contour(d, c, cr.conjugator, rm.u);
    attach_face(d, c, rm.t.size(), rm.s, it->id, r, fit.full.at(it->id));
    auto& sides = d.map.contours[sz(c)].sides;
    const long m = static_cast<long>(sides.size());
    std::rotate(sides.begin(), sides.begin() + (m - it->offset) % m, sides.end());
  }
  CyclicReduction cr = cyclic_reduce(free_reduce(w));
  expand_contour(d, c, cr.conjugator, w);
}

Rational min_weight(const Subpresentation& sub) {
  Rational best = -1;
  for (const auto& [id, w] : sub.weight)
    if (best < 0 || w < best) best = w;
  return best;
}

Fitted fitting(const Subpresentation& sub, const Rational& cap) {
  Fitted out;
  out.sub.foreign = sub.foreign;
  for (const auto& [id, r] : sub.relators) {
    const Rational& w = sub.weight.at(id);
    CyclicReduction cr = cyclic_reduce(r);
    if (w <= cap && !cr.core.empty()) {
      out.sub.relators[id] = cr.core;
      out.sub.weight[id] = w;
      out.full[id] = r;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- presentations

Subpresentation empty_presentation() { return Subpresentation{}; }

Subpresentation subpresentation(const PresentationFamily& fam, const std::vector<int>& kept) {
  Subpresentation s;
  for (int n : kept) {
    if (n < 1 || n > fam.size()) throw std::invalid_argument("relator index out of range");
    s.relators[n] = fam.relator(n).word;
    s.weight[n] = weight_of(fam, n);
  }
  return s;
}

Subpresentation foreign_presentation(const RelatorTable& rel, const Rational& gamma) {
  Subpresentation s;
  s.foreign = true;
  for (const auto& [id, r] : rel) {
    s.relators[id] = r;
    s.weight[id] = (Rational(1) - Rational(2) * gamma) * Rational(static_cast<long long>(r.size()));
  }
  return s;
}

int find_cutoff(const PresentationFamily&, std::int64_t L) {
  // floor(n) = n, so floor(n + 1) > L first holds at n = L
  return static_cast<int>(std::max<std::int64_t>(L, 0));
}

Budget make_budget(const Subpresentation& sub, std::int64_t L) {
  Budget b;
  b.weighted_area_cap = Rational(static_cast<long long>(L));
  Rational mw = min_weight(sub);
  if (mw > 0) b.face_cap = static_cast<int>(boost::rational_cast<long long>(b.weighted_area_cap / mw));
  return b;
}

// ---------------------------------------------------------------- enumeration

namespace {

struct Grown {
  Diagram d;
  Rational area;
};

std::vector<std::pair<int, GroupWord>> oriented_relators(const Subpresentation& sub) {
  std::vector<std::pair<int, GroupWord>> out;
  for (const auto& [id, r] : sub.relators) {
    out.push_back({id, r});
    out.push_back({id, inverse(r)});
  }
  return out;
}

}  // namespace

std::optional<std::vector<Diagram>> enumerate_diagrams(const Subpresentation& sub, const Budget& budget, Shape shape,
                                                       const std::vector<int>& lengths, long state_cap) {
  const std::size_t nc = shape == Shape::disc ? 1 : 2;
  if (lengths.size() != nc) throw std::invalid_argument("one contour length per contour");
  // only relators whose weight fits the area cap can occur
  long max_r = 0;
  long face_cap = 0;
  for (const auto& [id, r] : sub.relators) {
    const Rational& w = sub.weight.at(id);
    if (w > budget.weighted_area_cap) continue;
    max_r = std::max<long>(max_r, static_cast<long>(r.size()));
    long by_area = w > 0 ? static_cast<long>(boost::rational_cast<long long>(budget.weighted_area_cap / w)) : budget.face_cap;
    face_cap = std::max(face_cap, std::min<long>(budget.face_cap, by_area));
  }
  long total = 0;
  for (int l : lengths) total += l;
  const long edge_cap = (total + face_cap * max_r) / 2;
  auto rels = oriented_relators(sub);

  std::set<std::string> seen;
  std::deque<Grown> queue;
  std::vector<Diagram> out;
  // a face shortens a contour by at most max_r - 2 and spikes only lengthen it
  auto reachable = [&](const Diagram& d) {
    long excess = 0;
    for (std::size_t c = 0; c < nc; ++c)
      excess += std::max<long>(0, static_cast<long>(d.map.contours[c].sides.size()) - lengths[c]);
    long left = face_cap - static_cast<long>(d.map.faces.size());
    return excess <= left * std::max<long>(0, max_r - 2);
  };
  auto push = [&](Grown g) {
    if (!reachable(g.d)) return;
    g.d.map.rebuild_vertices();
    if (!seen.insert(canonical_form(g.d)).second) return;
    bool done = true;
    for (std::size_t c = 0; c < nc; ++c)
      done = done && static_cast<int>(g.d.map.contours[c].sides.size()) == lengths[c];
    if (done) out.push_back(g.d);
    queue.push_back(std::move(g));
  };
  if (shape == Shape::disc) {
    push(Grown{trivial_diagram(), Rational(0)});
  } else {
    // zero-face cycles of every length up to the edge cap
    for (long m = 1; m <= edge_cap; ++m) {
      long count = 1;
      for (long i = 0; i < m; ++i) count *= 4;
      for (long code = 0; code < count; ++code) {
        Diagram d;
        std::vector<int> a, b;
        long x = code;
        for (long i = 0; i < m; ++i) {
          a.push_back(new_edge(d, Letter::from_code(static_cast<int>(x % 4))));
          x /= 4;
        }
        for (auto it = a.rbegin(); it != a.rend(); ++it) b.push_back(-*it);
        d.map.contours = {Contour{a, -1}, Contour{b, -1}};
        push(Grown{d, Rational(0)});
        if (static_cast<long>(seen.size()) > state_cap) return std::nullopt;
      }
    }
  }
  while (!queue.empty()) {
    if (static_cast<long>(seen.size()) > state_cap) return std::nullopt;
    Grown g = std::move(queue.front());
    queue.pop_front();
    for (std::size_t c = 0; c < nc; ++c) {
      const long len = static_cast<long>(g.d.map.contours[c].sides.size());
      for (long p = 0; p <= len; ++p) {
        // a spike at corner p
        if (g.d.map.num_edges + 1 <= edge_cap)
          for (int code = 0; code < 4; ++code) {
            Grown h = g;
            auto& sides = h.d.map.contours[c].sides;
            int e = new_edge(h.d, Letter::from_code(code));
            sides.insert(sides.begin() + p, {e, -e});
            push(std::move(h));
          }
        // a face along the sides starting at corner p; a segment running past
        // the base moves the base to the start of the new face
        if (static_cast<long>(g.d.map.faces.size()) >= face_cap) continue;
        for (const auto& [id, R] : rels) {
          const Rational area = g.area + sub.weight.at(id);
          if (area > budget.weighted_area_cap) continue;
          const long n = static_cast<long>(R.size());
          for (long ell = 0; ell < n && ell <= len && (p < len || ell == 0); ++ell) {
            if (g.d.map.num_edges + (n - ell) > edge_cap) continue;
            std::vector<int> rotated = g.d.map.contours[c].sides;
            if (len > 0) std::rotate(rotated.begin(), rotated.begin() + p % len, rotated.end());
            GroupWord seg;
            for (long i = 0; i < ell; ++i) seg.push_back(Letter::from_code(g.d.dart_label(rotated[sz(i)])));
            GroupWord t = inverse(seg);
            for (long q = 0; q < n; ++q) {
              GroupWord rr = rotate(R, sz(q));
              if (!std::equal(t.begin(), t.end(), rr.end() - ell)) continue;
              Grown h = g;
              auto& sides = h.d.map.contours[c].sides;
              sides = rotated;
              GroupWord s(rr.begin(), rr.end() - ell);
              attach_face(h.d, static_cast<int>(c), sz(ell), s, id, sub.relators.at(id));
              if (p + ell <= len && len > 0 && p < len) {
                const long back = p;
                std::rotate(sides.begin(), sides.end() - back, sides.end());
              } else if (p == len && len > 0) {
                // ell = 0 after the last side
                std::rotate(sides.begin(), sides.begin() + static_cast<long>(s.size()), sides.end());
              }
              h.area = area;
              push(std::move(h));
            }
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- word problem

const char* word_verdict_name(WordVerdict v) {
  switch (v) {
    case WordVerdict::trivial:
      return "trivial";
    case WordVerdict::nontrivial:
      return "nontrivial";
    case WordVerdict::undecided:
      return "undecided";
  }
  return "?";
}

const char* conj_verdict_name(ConjVerdict v) {
  switch (v) {
    case ConjVerdict::conjugate:
      return "conjugate";
    case ConjVerdict::not_conjugate:
      return "not-conjugate";
    case ConjVerdict::undecided:
      return "undecided";
  }
  return "?";
}

const char* oracle_verdict_name(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::trivial:
      return "trivial";
    case OracleVerdict::nontrivial_within_radius:
      return "nontrivial-within-radius";
    case OracleVerdict::unknown:
      return "unknown";
  }
  return "?";
}

WordResult solve_word(const Subpresentation& sub_in, const GroupWord& w, const SolveOptions& opt) {
  WordResult res;
  const Rational cap(static_cast<long long>(w.size()));
  GroupWord core = cyclic_core(w);
  if (core.empty()) {
    res.verdict = WordVerdict::trivial;
    res.certificate = tree_diagram(w);
    return res;
  }
  Fitted fit = fitting(sub_in, cap);
  const Subpresentation& sub = fit.sub;
  const bool unsound = sub.foreign && !opt.assert_isoperimetric;
  if (sub.relators.empty()) {
    if (unsound) {
      res.note = "unsound-for-foreign";
      return res;
    }
    res.verdict = WordVerdict::nontrivial;
    res.note = "no relator fits the budget";
    return res;
  }
  FaceSearch search(sub, opt.node_cap);
  std::vector<Step> found;
  bool ok = search.run(core, cap, [&](const GroupWord& c, const std::vector<Step>& path, const Rational&) {
    if (!c.empty()) return false;
    found = path;
    return true;
  });
  if (ok) {
    Diagram d = trivial_diagram();
    replay(d, 0, fit, found, w);
    d.map.rebuild_vertices();
    res.verdict = WordVerdict::trivial;
    res.faces = static_cast<int>(found.size());
    res.certificate = std::move(d);
    return res;
  }
  if (search.exhausted()) {
    res.note = "search budget exhausted";
    return res;
  }
  if (unsound) {
    res.note = "unsound-for-foreign";
    return res;
  }
  res.verdict = WordVerdict::nontrivial;
  return res;
}

namespace {

// Relators of I up to the cutoff whose weight fits `cap`; nullopt when a
// needed membership flag or relator is missing.
std::optional<Subpresentation> family_part(const PresentationFamily& fam, std::int64_t cap, std::string& note) {
  const int cutoff = find_cutoff(fam, cap);
  const Rational c(static_cast<long long>(cap));
  std::vector<int> kept;
  for (int n = 1; n <= std::min(cutoff, fam.size()); ++n) {
    if (weight_of(fam, n) > c) continue;
    switch (fam.in_I[sz(n - 1)]) {
      case Membership::in:
        kept.push_back(n);
        break;
      case Membership::out:
        break;
      case Membership::unknown:
        note = "membership of index " + std::to_string(n) + " unknown";
        return std::nullopt;
    }
  }
  // weights grow with n, so indices past the family fit only if the next one does
  if (cutoff > fam.size() && fam.size() > 0 && weight_of(fam, fam.size()) <= c) {
    bool fits = true;
    try {
      fits = next_weight(fam) <= c;
    } catch (const std::exception&) {
    }
    if (fits) {
      note = "family shorter than the cutoff";
      return std::nullopt;
    }
  }
  return subpresentation(fam, kept);
}

}  // namespace

WordResult solve_word(const PresentationFamily& fam, const GroupWord& w, const SolveOptions& opt) {
  std::string note;
  auto sub = family_part(fam, static_cast<std::int64_t>(w.size()), note);
  if (!sub) {
    WordResult res;
    res.note = note;
    return res;
  }
  return solve_word(*sub, w, opt);
}

WordSolver family_word_solver(const PresentationFamily& fam, const SolveOptions& opt) {
  return [&fam, opt](const std::vector<int>& kept, const GroupWord& w) {
    return solve_word(subpresentation(fam, kept), w, opt).verdict;
  };
}

// ---------------------------------------------------------------- conjugacy

ConjResult solve_conjugacy(const Subpresentation& sub_in, const GroupWord& w1, const GroupWord& w2,
                           const SolveOptions& opt) {
  ConjResult res;
  WordResult t1 = solve_word(sub_in, w1, opt);
  WordResult t2 = solve_word(sub_in, w2, opt);
  if (t1.verdict == WordVerdict::undecided || t2.verdict == WordVerdict::undecided) {
    res.note = "triviality undecided";
    return res;
  }
  if (t1.verdict == WordVerdict::trivial && t2.verdict == WordVerdict::trivial) {
    WordResult both = solve_word(sub_in, concat(w1, inverse(w2)), opt);
    res.verdict = ConjVerdict::conjugate;
    res.certificate = both.certificate;
    res.note = "both trivial";
    return res;
  }
  if (t1.verdict != t2.verdict) {
    res.verdict = ConjVerdict::not_conjugate;
    return res;
  }
  const Rational cap(static_cast<long long>(w1.size() + w2.size()));
  Fitted fit = fitting(sub_in, cap);
  const Subpresentation& sub = fit.sub;
  const GroupWord v2 = inverse(w2);
  const GroupWord c1 = cyclic_core(w1), c2 = cyclic_core(v2);
  // every cyclic word reachable from w2^-1, keyed by its least rotation
  struct Reached {
    GroupWord word;
    std::vector<Step> path;
    Rational left;
  };
  std::map<GroupWord, Reached> side2;
  FaceSearch s2(sub, opt.node_cap);
  s2.run(c2, cap, [&](const GroupWord& c, const std::vector<Step>& path, const Rational& left) {
    GroupWord key = min_rotation(inverse(c));
    auto it = side2.find(key);
    if (it == side2.end() || it->second.left < left) side2[key] = Reached{c, path, left};
    return false;
  });
  std::optional<std::pair<Reached, Reached>> match;
  FaceSearch s1(sub, opt.node_cap);
  s1.run(c1, cap, [&](const GroupWord& c, const std::vector<Step>& path, const Rational& left) {
    auto it = side2.find(min_rotation(c));
    if (it == side2.end()) return false;
    // the two sides share one budget
    if (left + it->second.left < cap) return false;
    match = std::make_pair(Reached{c, path, left}, it->second);
    return true;
  });
  if (!match) {
    if (s1.exhausted() || s2.exhausted()) {
      res.note = "search budget exhausted";
      return res;
    }
    if (sub.foreign && !opt.assert_isoperimetric) {
      res.note = "unsound-for-foreign";
      return res;
    }
    res.verdict = ConjVerdict::not_conjugate;
    return res;
  }
  const GroupWord& e1 = match->first.word;
  const GroupWord& e2 = match->second.word;
  Diagram d;
  std::vector<int> a, b;
  for (Letter l : e1) a.push_back(new_edge(d, l));
  for (auto it = a.rbegin(); it != a.rend(); ++it) b.push_back(-*it);
  // turn the second contour so that it reads e2
  auto k = rotation_offset(e2, inverse(e1));
  if (!k) throw std::logic_error("annulus sides disagree");
  std::rotate(b.begin(), b.begin() + static_cast<long>(*k), b.end());
  d.map.contours = {Contour{a, -1}, Contour{b, -1}};
  replay(d, 0, fit, match->first.path, w1);
  replay(d, 1, fit, match->second.path, v2);
  d.map.rebuild_vertices();
  res.verdict = ConjVerdict::conjugate;
  res.certificate = std::move(d);
  return res;
}

ConjResult solve_conjugacy(const PresentationFamily& fam, const GroupWord& w1, const GroupWord& w2,
                           const SolveOptions& opt) {
  std::string note;
  auto sub = family_part(fam, static_cast<std::int64_t>(w1.size() + w2.size()), note);
  if (!sub) {
    ConjResult res;
    res.note = note;
    return res;
  }
  return solve_conjugacy(*sub, w1, w2, opt);
}

// ---------------------------------------------------------------- oracle

namespace {

std::vector<long> occurrences_of(const GroupWord& text, const GroupWord& pat) {
  std::vector<long> out;
  const std::size_t m = pat.size();
  if (m == 0 || m > text.size()) return out;
  std::vector<std::size_t> pi(m, 0);
  for (std::size_t i = 1, k = 0; i < m; ++i) {
    while (k > 0 && pat[i] != pat[k]) k = pi[k - 1];
    if (pat[i] == pat[k]) ++k;
    pi[i] = k;
  }
  for (std::size_t i = 0, k = 0; i < text.size(); ++i) {
    while (k > 0 && text[i] != pat[k]) k = pi[k - 1];
    if (text[i] == pat[k]) ++k;
    if (k == m) {
      out.push_back(static_cast<long>(i + 1 - m));
      k = pi[k - 1];
    }
  }
  return out;
}

void words_up_to(int len, GroupWord& cur, std::vector<GroupWord>& out) {
  out.push_back(cur);
  if (static_cast<int>(cur.size()) == len) return;
  for (int c = 0; c < 4; ++c) {
    Letter l = Letter::from_code(c);
    if (!cur.empty() && cur.back() == l.inv()) continue;
    cur.push_back(l);
    words_up_to(len, cur, out);
    cur.pop_back();
  }
}

}  // namespace

OracleVerdict oracle_word(const RelatorTable& rel, const GroupWord& w, const OracleOptions& opt) {
  std::vector<GroupWord> us;
  GroupWord cur;
  words_up_to(opt.radius, cur, us);
  std::set<GroupWord> patterns;
  for (const auto& [id, r] : rel)
    for (const GroupWord& R : {r, inverse(r)})
      for (const auto& u : us) {
        GroupWord g = free_reduce(concat(concat(u, R), inverse(u)));
        if (!g.empty()) patterns.insert(g);
      }
  std::set<GroupWord> seen;
  std::vector<GroupWord> layer{free_reduce(w)};
  seen.insert(layer.front());
  for (int depth = 0;; ++depth) {
    for (const auto& x : layer)
      if (x.empty()) return OracleVerdict::trivial;
    if (depth == opt.radius) break;
    std::vector<GroupWord> next;
    auto add = [&](GroupWord y) {
      y = free_reduce(y);
      if (seen.insert(y).second) next.push_back(std::move(y));
    };
    for (const auto& x : layer) {
      for (const auto& g : patterns) {
        for (long at : occurrences_of(x, g)) {
          GroupWord y(x.begin(), x.begin() + at);
          y.insert(y.end(), x.begin() + at + static_cast<long>(g.size()), x.end());
          add(std::move(y));
        }
        if (x.size() + g.size() <= opt.insert_len_cap)
          for (std::size_t at = 0; at <= x.size(); ++at) {
            GroupWord y(x.begin(), x.begin() + static_cast<long>(at));
            y.insert(y.end(), g.begin(), g.end());
            y.insert(y.end(), x.begin() + static_cast<long>(at), x.end());
            add(std::move(y));
          }
      }
      if (static_cast<long>(seen.size()) > opt.state_cap) return OracleVerdict::unknown;
    }
    layer = std::move(next);
  }
  return OracleVerdict::nontrivial_within_radius;
}

}  // namespace vkd
