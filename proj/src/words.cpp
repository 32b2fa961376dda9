#include "vkd/words.hpp"

#include <algorithm>
#include <cctype>

namespace vkd {

std::optional<Letter> parse_letter(char c) {
  switch (c) {
    case 'a': return Letter{0, 1};
    case 'b': return Letter{1, 1};
    case 'A': return Letter{0, -1};
    case 'B': return Letter{1, -1};
    default: return std::nullopt;
  }
}

GroupWord parse_word(std::string_view text) {
  GroupWord w;
  w.reserve(text.size());
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    auto l = parse_letter(c);
    if (!l) throw ParseError(std::string("bad letter '") + c + "' in word");
    w.push_back(*l);
  }
  return w;
}

std::string format_word(const GroupWord& w) {
  std::string s;
  s.reserve(w.size());
  for (Letter l : w) s.push_back(l.to_char());
  return s;
}

GroupWord inverse(const GroupWord& w) {
  GroupWord r(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) r[w.size() - 1 - i] = w[i].inv();
  return r;
}

GroupWord concat(const GroupWord& x, const GroupWord& y) {
  GroupWord r;
  r.reserve(x.size() + y.size());
  r.insert(r.end(), x.begin(), x.end());
  r.insert(r.end(), y.begin(), y.end());
  return r;
}

GroupWord power(const GroupWord& w, std::int64_t e) {
  GroupWord base = e < 0 ? inverse(w) : w;
  if (e < 0) e = -e;
  GroupWord r;
  r.reserve(base.size() * static_cast<std::size_t>(e));
  for (std::int64_t i = 0; i < e; ++i) r.insert(r.end(), base.begin(), base.end());
  return r;
}

GroupWord letter_power(Letter l, std::int64_t e) {
  if (e < 0) {
    l = l.inv();
    e = -e;
  }
  return GroupWord(static_cast<std::size_t>(e), l);
}

GroupWord rotate(const GroupWord& w, std::size_t k) {
  if (w.empty()) return w;
  k %= w.size();
  GroupWord r;
  r.reserve(w.size());
  r.insert(r.end(), w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
  r.insert(r.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
  return r;
}

bool is_reduced(const GroupWord& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == w[i - 1].inv()) return false;
  return true;
}

bool is_cyclically_reduced(const GroupWord& w) {
  if (!is_reduced(w)) return false;
  return w.size() < 2 || w.front() != w.back().inv();
}

GroupWord free_reduce(const GroupWord& w) {
  GroupWord st;
  st.reserve(w.size());
  for (Letter l : w) {
    if (!st.empty() && st.back() == l.inv())
      st.pop_back();
    else
      st.push_back(l);
  }
  return st;
}

CyclicReduction cyclic_reduce(const GroupWord& w) {
  GroupWord r = free_reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == r[j - 1].inv()) {
    ++i;
    --j;
  }
  CyclicReduction out;
  out.conjugator.assign(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(i));
  out.core.assign(r.begin() + static_cast<std::ptrdiff_t>(i),
                  r.begin() + static_cast<std::ptrdiff_t>(j));
  return out;
}

GroupWord cyclic_core(const GroupWord& w) { return cyclic_reduce(w).core; }

namespace {

std::vector<std::size_t> prefix_function(const GroupWord& s) {
  std::vector<std::size_t> pi(s.size(), 0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && s[i] != s[k]) k = pi[k - 1];
    if (s[i] == s[k]) ++k;
    pi[i] = k;
  }
  return pi;
}

}  // namespace

std::size_t primitive_period(const GroupWord& w) {
  if (w.empty()) return 0;
  auto pi = prefix_function(w);
  std::size_t p = w.size() - pi.back();
  return (w.size() % p == 0) ? p : w.size();
}

std::optional<PowerDecomposition> is_proper_power(const GroupWord& w) {
  GroupWord core = cyclic_core(w);
  if (core.empty()) return std::nullopt;
  std::size_t p = primitive_period(core);
  if (p == core.size()) return std::nullopt;
  PowerDecomposition d;
  d.root.assign(core.begin(), core.begin() + static_cast<std::ptrdiff_t>(p));
  d.exponent = static_cast<int>(core.size() / p);
  return d;
}

std::optional<std::size_t> rotation_offset(const GroupWord& u, const GroupWord& v) {
  if (u.size() != v.size()) return std::nullopt;
  if (u.empty()) return 0;
  // Find u inside v v using the prefix function of u.
  auto pi = prefix_function(u);
  std::size_t k = 0, n = v.size();
  for (std::size_t i = 0; i + 1 < 2 * n; ++i) {
    Letter c = v[i % n];
    while (k > 0 && c != u[k]) k = pi[k - 1];
    if (c == u[k]) ++k;
    if (k == u.size()) return (i + 1 - u.size()) % n;
  }
  return std::nullopt;
}

bool is_rotation_of(const GroupWord& u, const GroupWord& v) {
  return rotation_offset(u, v).has_value();
}

GroupWord min_rotation(const GroupWord& w) {
  std::size_t n = w.size();
  if (n == 0) return w;
  // Booth-style two pointer scan.
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    Letter x = w[(i + k) % n], y = w[(j + k) % n];
    if (x == y) {
      ++k;
      continue;
    }
    if (y < x)
      i = i + k + 1;
    else
      j = j + k + 1;
    if (i == j) ++j;
    k = 0;
  }
  return rotate(w, std::min(i, j));
}

std::vector<Run> to_runs(const GroupWord& w) {
  std::vector<Run> runs;
  for (Letter l : w) {
    if (!runs.empty() && runs.back().letter == l)
      ++runs.back().len;
    else
      runs.push_back({l, 1});
  }
  return runs;
}

GroupWord from_runs(const std::vector<Run>& runs) {
  GroupWord w;
  for (const Run& r : runs) w.insert(w.end(), static_cast<std::size_t>(r.len), r.letter);
  return w;
}

CommonSubword max_common_subword_runs(const std::vector<Run>& U,
                                      const std::vector<Run>& V,
                                      bool distinct) {
  const std::size_t P = U.size(), Q = V.size();
  std::vector<std::int64_t> pu(P + 1, 0), pv(Q + 1, 0);
  for (std::size_t i = 0; i < P; ++i) pu[i + 1] = pu[i] + U[i].len;
  for (std::size_t j = 0; j < Q; ++j) pv[j + 1] = pv[j] + V[j].len;

  CommonSubword best;
  auto offer = [&](std::int64_t len, std::int64_t a, std::int64_t b) {
    if (len > best.length) best = {len, a, b};
  };

  // next[q] holds the number of consecutive identical runs starting at
  // (p+1, q); cur is filled for row p.
  std::vector<std::uint32_t> next(Q + 1, 0), cur(Q + 1, 0);
  for (std::size_t p = P; p-- > 0;) {
    const Run& up = U[p];
    for (std::size_t q = Q; q-- > 0;) {
      const Run& vq = V[q];
      bool same_letter = up.letter == vq.letter;
      cur[q] = (same_letter && up.len == vq.len) ? 1 + next[q + 1] : 0;
      if (!same_letter) continue;
      std::int64_t h = std::min(up.len, vq.len);
      if (distinct && p == q) {
        offer(up.len - 1, pu[p], pu[p] + 1);
        continue;
      }
      offer(h, pu[p], pv[q]);
      std::size_t chain = (p + 1 < P && q + 1 < Q) ? next[q + 1] : 0;
      std::int64_t total = h + (pu[p + 1 + chain] - pu[p + 1]);
      std::size_t tp = p + 1 + chain, tq = q + 1 + chain;
      if (tp < P && tq < Q && U[tp].letter == V[tq].letter)
        total += std::min(U[tp].len, V[tq].len);
      offer(total, pu[p] + up.len - h, pv[q] + vq.len - h);
    }
    std::swap(next, cur);
  }
  if (best.length <= 0) return CommonSubword{};
  return best;
}

CommonSubword max_common_subword(const GroupWord& u, const GroupWord& v,
                                 bool distinct) {
  return max_common_subword_runs(to_runs(u), to_runs(v), distinct);
}

std::int64_t max_z_overlap_runs(const std::vector<Run>& runs) {
  std::int64_t best = 0;
  const std::size_t n = runs.size();
  // even_end[i]: one past the last run of the maximal stretch of even runs
  // starting at i.
  std::vector<std::size_t> even_end(n + 1, n);
  for (std::size_t i = n; i-- > 0;)
    even_end[i] = (runs[i].len % 2 == 0) ? even_end[i + 1] : i;
  std::vector<std::int64_t> pre(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) pre[i + 1] = pre[i] + runs[i].len;
  for (std::size_t p = 0; p < n; ++p) {
    std::int64_t total = runs[p].len;
    if (p + 1 < n) {
      std::size_t e = even_end[p + 1];
      total += pre[e] - pre[p + 1];
      if (e < n) total += runs[e].len;
    }
    best = std::max(best, total);
  }
  return best;
}

std::int64_t max_z_overlap(const GroupWord& w) { return max_z_overlap_runs(to_runs(w)); }

GroupWord z_word(const ZSpec& spec) {
  GroupWord w;
  for (const ZFactor& f : spec) {
    Letter l{f.index == 1 ? 0 : 1, f.exponent < 0 ? -1 : 1};
    std::int64_t e = f.exponent < 0 ? -static_cast<std::int64_t>(f.exponent) : f.exponent;
    w.insert(w.end(), static_cast<std::size_t>(2 * e), l);
  }
  return w;
}

std::optional<ZSpec> is_z_concatenation(const GroupWord& w) {
  ZSpec spec;
  for (const Run& r : to_runs(w)) {
    if (r.len % 2 != 0) return std::nullopt;
    spec.push_back({r.letter.gen() + 1, static_cast<int>(r.letter.sign() * (r.len / 2))});
  }
  return spec;
}

GroupWord build_test_word(int n) {
  GroupWord w;
  for (int i = 0; i <= n; ++i) {
    w.insert(w.end(), static_cast<std::size_t>(2 * i), kA);
    w.insert(w.end(), static_cast<std::size_t>(2 * n - 2 * i), kB);
  }
  return w;
}

GroupWord commutator(const GroupWord& x, const GroupWord& y) {
  return concat(concat(x, y), concat(inverse(x), inverse(y)));
}

std::vector<GroupWord> commutators_to_squares(
    const std::vector<std::pair<GroupWord, GroupWord>>& pairs) {
  std::vector<GroupWord> out;
  for (const auto& [x, y] : pairs) {
    out.push_back(free_reduce(x));
    out.push_back(free_reduce(concat(inverse(x), y)));
    out.push_back(free_reduce(inverse(y)));
  }
  return out;
}

GroupWord word_at(std::uint64_t index) {
  std::size_t len = 0;
  std::uint64_t block = 1;
  while (index >= block) {
    index -= block;
    block *= 4;
    ++len;
  }
  GroupWord w(len);
  for (std::size_t i = len; i-- > 0;) {
    w[i] = Letter::from_code(static_cast<int>(index % 4));
    index /= 4;
  }
  return w;
}

}  // namespace vkd
