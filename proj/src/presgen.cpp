#include "vkd/presgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vkd {

Rational gamma_of(int k, const Rational& lambda, const Rational& mu, const Rational& nu) {
  return lambda + Rational(3 + 4 * k) * mu + Rational(2) * nu;
}

ParamSet make_params(int n, std::int64_t M) {
  ParamSet p;
  p.n = n;
  p.k = 3 + n;
  p.kappa = 2 * p.k;
  p.nu = Rational(1, 2 * p.k);
  p.chi = 4 - p.k;
  p.lambda = Rational(1, 4LL * p.k * (7LL * p.k - 5));
  p.mu = p.lambda;
  p.gamma = gamma_of(p.k, p.lambda, p.mu, p.nu);
  p.M = M;
  return p;
}

ConditionSpec enumerate_conditions(int n) {
  if (n < 1) throw std::invalid_argument("condition index must be positive");
  ConditionSpec c;
  c.n = n;
  if (n % 2 == 1) {
    std::uint64_t t = static_cast<std::uint64_t>(n - 1) / 2;
    c.kind = RelatorKind::first;
    c.w = word_at(t / 2);
    c.x = static_cast<int>(t % 2);
  } else {
    // Cantor unpairing of t into (word index, m - 1).
    std::uint64_t t = static_cast<std::uint64_t>(n - 2) / 2;
    std::uint64_t d = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(t) + 1) - 1) / 2);
    while (d * (d + 1) / 2 > t) --d;
    while ((d + 1) * (d + 2) / 2 <= t) ++d;
    std::uint64_t y = t - d * (d + 1) / 2;
    std::uint64_t x = d - y;
    c.kind = RelatorKind::second;
    c.w = word_at(x);
    c.m = static_cast<std::int64_t>(y) + 1;
  }
  return c;
}

std::int64_t u_length(int k, std::int64_t M) { return 2 * M * (2 * M * k + 1); }

std::vector<Run> build_u_runs(int i, int k, std::int64_t M) {
  std::vector<Run> runs;
  runs.reserve(static_cast<std::size_t>(4 * M));
  for (std::int64_t j = 2 * M * (i - 1) + 1; j <= 2 * M * i; ++j) {
    runs.push_back({kA, j});
    runs.push_back({kB, 2 * M * k + 1 - j});
  }
  return runs;
}

GroupWord build_u(int i, int k, std::int64_t M) { return from_runs(build_u_runs(i, k, M)); }

BlockRef Relator::locate(std::int64_t pos) const {
  BlockRef r;
  std::int64_t body = k * period();
  if (pos >= body) {
    r.kind = BlockRef::tail;
    r.offset = pos - body;
    return r;
  }
  r.j = static_cast<int>(pos / period()) + 1;
  std::int64_t off = pos % period();
  if (off < u_len) {
    r.kind = BlockRef::u_block;
    r.offset = off;
  } else if (off < u_len + core_len) {
    r.kind = BlockRef::core;
    r.offset = off - u_len;
  } else {
    r.kind = BlockRef::u_inverse;
    r.offset = off - u_len - core_len;
  }
  return r;
}

GroupWord Relator::u_block(int j) const {
  auto b = word.begin() + u_start(j);
  return GroupWord(b, b + u_len);
}

GroupWord Relator::core_block() const {
  auto b = word.begin() + u_len;
  return GroupWord(b, b + core_len);
}

Relator build_relator(const ParamSet& p, const ConditionSpec& spec, const GroupWord& v) {
  Relator r;
  r.n = p.n;
  r.kind = spec.kind;
  r.k = p.k;
  r.u_len = u_length(p.k, p.M);
  const GroupWord& core = spec.kind == RelatorKind::first ? spec.w : v;
  r.core_len = static_cast<std::int64_t>(core.size());
  GroupWord tail;
  if (spec.kind == RelatorKind::first)
    tail.push_back(Letter(spec.x, -1));
  else
    tail = power(inverse(spec.w), spec.m * p.k);
  r.tail_len = static_cast<std::int64_t>(tail.size());
  r.word.reserve(static_cast<std::size_t>(p.k * r.period() + r.tail_len));
  for (int j = 1; j <= p.k; ++j) {
    auto runs = build_u_runs(j, p.k, p.M);
    GroupWord u = from_runs(runs);
    r.word.insert(r.word.end(), u.begin(), u.end());
    r.word.insert(r.word.end(), core.begin(), core.end());
    GroupWord ui = inverse(u);
    r.word.insert(r.word.end(), ui.begin(), ui.end());
  }
  r.word.insert(r.word.end(), tail.begin(), tail.end());
  return r;
}

std::optional<Relator> relator_from_word(int n, RelatorKind kind, const GroupWord& word, int k,
                                         std::int64_t M, std::int64_t v_len) {
  if (k < 1 || M < 1) return std::nullopt;
  Relator r;
  r.n = n;
  r.kind = kind;
  r.word = word;
  r.k = k;
  r.u_len = u_length(k, M);
  auto total = static_cast<std::int64_t>(word.size());
  if (kind == RelatorKind::first) {
    std::int64_t rest = total - 1 - 2 * k * r.u_len;
    if (rest < 0 || rest % k != 0) return std::nullopt;
    r.core_len = rest / k;
    r.tail_len = 1;
  } else {
    r.core_len = v_len;
    r.tail_len = total - k * (2 * r.u_len + v_len);
    if (r.tail_len < 0) return std::nullopt;
  }
  // Layout: every u^-1 block inverts its u block, and the cores agree.
  GroupWord core = r.core_block();
  for (int j = 1; j <= k; ++j) {
    GroupWord u = r.u_block(j);
    auto ib = word.begin() + r.u_inverse_start(j);
    if (!std::equal(ib, ib + r.u_len, inverse(u).begin())) return std::nullopt;
    auto cb = word.begin() + r.u_start(j) + r.u_len;
    if (!std::equal(cb, cb + r.core_len, core.begin())) return std::nullopt;
  }
  return r;
}

Rational weight_of(const PresentationFamily& fam, int n) {
  const auto& p = fam.param(n);
  return (Rational(1) - Rational(2) * p.gamma) *
         Rational(static_cast<long long>(fam.relator(n).word.size()));
}

namespace {

bool leq(std::int64_t s, const Rational& bound) {
  return Rational(static_cast<long long>(s)) <= bound;
}

struct USet {
  int n;
  Rational bound;  // mu_n |r_n|
  std::vector<std::vector<Run>> runs;
};

struct C5Witness {
  bool ok = true;
  std::int64_t worst = 0;
  std::string detail;
};

// Compare the u-blocks of `cur` with each other and with every earlier set.
C5Witness c5_scan(const USet& cur, const std::vector<USet>& earlier) {
  C5Witness w;
  auto record = [&](const CommonSubword& c, const USet& a, int ia, const USet& b, int ib) {
    w.worst = std::max(w.worst, c.length);
    Rational lim = std::min(a.bound, b.bound);
    if (!leq(c.length, lim) && w.ok) {
      w.ok = false;
      std::ostringstream os;
      os << "u(" << a.n << "," << ia << ") at " << c.pos_u << " and u(" << b.n << "," << ib
         << ") at " << c.pos_v << " share |s|=" << c.length << " > " << to_string(lim);
      w.detail = os.str();
    }
  };
  const int k = static_cast<int>(cur.runs.size());
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      // u^-1 against u^-1 is the mirror image of u against u; opposite
      // signs share no letters.
      auto c = max_common_subword_runs(cur.runs[static_cast<std::size_t>(i)],
                                       cur.runs[static_cast<std::size_t>(j)], i == j);
      record(c, cur, i + 1, cur, j + 1);
    }
    for (const USet& e : earlier)
      for (std::size_t j = 0; j < e.runs.size(); ++j) {
        auto c = max_common_subword_runs(cur.runs[static_cast<std::size_t>(i)], e.runs[j]);
        record(c, cur, i + 1, e, static_cast<int>(j) + 1);
      }
  }
  return w;
}

std::int64_t spec_core_len(const ConditionSpec& s, const GroupWord& v) {
  return s.kind == RelatorKind::first ? static_cast<std::int64_t>(s.w.size())
                                      : static_cast<std::int64_t>(v.size());
}

std::int64_t spec_tail_len(const ConditionSpec& s, int k) {
  return s.kind == RelatorKind::first ? 1 : s.m * k * static_cast<std::int64_t>(s.w.size());
}

std::vector<USet> earlier_usets(const PresentationFamily& fam, int upto) {
  std::vector<USet> out;
  for (int n = 1; n < upto; ++n) {
    const auto& p = fam.param(n);
    USet s{n, p.mu * Rational(static_cast<long long>(fam.relator(n).word.size())), {}};
    for (int i = 1; i <= p.k; ++i) s.runs.push_back(to_runs(fam.relator(n).u_block(i)));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

ParamSet params_for(int n, const PresentationFamily& earlier, const GenOptions& opt) {
  if (n < 1) throw std::invalid_argument("index must be positive");
  if (opt.force_M) return make_params(n, *opt.force_M);
  std::int64_t floor_M = 1;
  if (n > 1) {
    const auto& prev = earlier.param(n - 1);
    floor_M = prev.M * prev.k / (3 + n) + 1;
  }
  ConditionSpec spec = enumerate_conditions(n);
  std::int64_t max_w = 0;
  for (int i = 1; i < n; ++i)
    if (earlier.relator(i).kind == RelatorKind::first) max_w = std::max(max_w, earlier.relator(i).core_len);
  std::vector<USet> prev_sets = earlier_usets(earlier, n);

  for (std::int64_t M = floor_M; M <= opt.M_cap; ++M) {
    ParamSet p = make_params(n, M);
    std::int64_t U = u_length(p.k, M);
    std::int64_t len = p.k * (2 * U + spec_core_len(spec, earlier.v)) + spec_tail_len(spec, p.k);
    Rational L(static_cast<long long>(len));
    Rational weight = (Rational(1) - Rational(2) * p.gamma) * L;
    if (Rational(2LL * p.k * U) < (Rational(1) - p.lambda) * L) continue;          // C3
    if (!(Rational(static_cast<long long>(max_w)) < weight)) continue;               // C9
    if (!(Rational(static_cast<long long>(earlier.v.size())) < weight)) continue;    // C10
    if (weight < Rational(n)) continue;
    Rational mu_r = p.mu * L;
    USet cur{n, mu_r, {}};
    bool c6 = true;
    for (int i = 1; i <= p.k && c6; ++i) {
      cur.runs.push_back(build_u_runs(i, p.k, M));
      c6 = leq(max_z_overlap_runs(cur.runs.back()), mu_r);
    }
    if (!c6) continue;
    if (!c5_scan(cur, prev_sets).ok) continue;
    return p;
  }
  throw std::runtime_error("no feasible M below the cap for index " + std::to_string(n));
}

Rational next_weight(const PresentationFamily& fam, const GenOptions& opt) {
  const int n = fam.size() + 1;
  ParamSet p = params_for(n, fam, opt);
  ConditionSpec spec = enumerate_conditions(n);
  std::int64_t len = p.k * (2 * u_length(p.k, p.M) + spec_core_len(spec, fam.v)) + spec_tail_len(spec, p.k);
  return (Rational(1) - Rational(2) * p.gamma) * Rational(static_cast<long long>(len));
}

PresentationFamily generate_family(int n_max, const GenOptions& opt) {
  PresentationFamily fam;
  fam.v = parse_word("ab");
  for (int n = 1; n <= n_max; ++n) {
    ParamSet p = params_for(n, fam, opt);
    fam.params.push_back(p);
    fam.relators.push_back(build_relator(p, enumerate_conditions(n), fam.v));
    fam.in_I.push_back(Membership::unknown);
  }
  return fam;
}

std::vector<ConditionReport> check_conditions(const PresentationFamily& fam, int N,
                                              const std::set<std::string>& which) {
  for (const auto& name : which)
    if (std::find(all_condition_names().begin(), all_condition_names().end(), name) ==
        all_condition_names().end())
      throw std::invalid_argument("unknown or uncheckable condition " + name);
  N = std::min(N, fam.size());
  std::vector<ConditionReport> out;
  auto want = [&](const char* c) { return which.count(c) > 0; };
  auto rlen = [&](int n) { return Rational(static_cast<long long>(fam.relator(n).word.size())); };

  if (want("C1")) {
    ConditionReport r{"C1", true, ""};
    int min_k = 1 << 30;
    for (int n = 1; n <= N; ++n) {
      min_k = std::min(min_k, fam.param(n).k);
      if (fam.param(n).k < 3 && r.pass) {
        r.pass = false;
        r.detail = "n=" + std::to_string(n) + " k=" + std::to_string(fam.param(n).k);
      }
    }
    if (r.pass) r.detail = "min k=" + std::to_string(min_k);
    out.push_back(r);
  }
  if (want("C2")) {
    ConditionReport r{"C2", true, "all u reduced"};
    for (int n = 1; n <= N && r.pass; ++n)
      for (int j = 1; j <= fam.relator(n).k && r.pass; ++j)
        if (!is_reduced(fam.relator(n).u_block(j))) {
          r.pass = false;
          r.detail = "u(" + std::to_string(n) + "," + std::to_string(j) + ") not reduced";
        }
    out.push_back(r);
  }
  if (want("C3")) {
    ConditionReport r{"C3", true, ""};
    std::optional<Rational> margin;
    for (int n = 1; n <= N; ++n) {
      const auto& rel = fam.relator(n);
      Rational lhs(2LL * rel.k * rel.u_len);
      Rational m = lhs - (Rational(1) - fam.param(n).lambda) * rlen(n);
      if (!margin || m < *margin) margin = m;
      if (m < 0 && r.pass) {
        r.pass = false;
        r.detail = "n=" + std::to_string(n) + " margin " + to_string(m);
      }
    }
    if (r.pass) r.detail = "min margin " + (margin ? to_string(*margin) : std::string("none"));
    out.push_back(r);
  }
  if (want("C4")) {
    ConditionReport r{"C4", true, ""};
    std::optional<Rational> margin;
    for (int n = 1; n <= N; ++n) {
      Rational m = fam.param(n).nu * rlen(n) - Rational(static_cast<long long>(fam.relator(n).u_len));
      if (!margin || m < *margin) margin = m;
      if (m < 0 && r.pass) {
        r.pass = false;
        r.detail = "n=" + std::to_string(n) + " margin " + to_string(m);
      }
    }
    if (r.pass) r.detail = "min margin " + (margin ? to_string(*margin) : std::string("none"));
    out.push_back(r);
  }
  if (want("C5")) {
    ConditionReport r{"C5", true, ""};
    std::vector<USet> sets;
    std::int64_t worst = 0;
    for (int n = 1; n <= N; ++n) {
      USet cur{n, fam.param(n).mu * rlen(n), {}};
      for (int j = 1; j <= fam.relator(n).k; ++j) cur.runs.push_back(to_runs(fam.relator(n).u_block(j)));
      auto w = c5_scan(cur, sets);
      worst = std::max(worst, w.worst);
      if (!w.ok && r.pass) {
        r.pass = false;
        r.detail = w.detail;
      }
      sets.push_back(std::move(cur));
    }
    if (r.pass) r.detail = "max |s|=" + std::to_string(worst);
    out.push_back(r);
  }
  if (want("C6")) {
    ConditionReport r{"C6", true, ""};
    std::int64_t worst = 0;
    for (int n = 1; n <= N; ++n) {
      Rational bound = fam.param(n).mu * rlen(n);
      for (int j = 1; j <= fam.relator(n).k; ++j) {
        std::int64_t s = max_z_overlap(fam.relator(n).u_block(j));
        worst = std::max(worst, s);
        if (!leq(s, bound) && r.pass) {
          r.pass = false;
          r.detail = "u(" + std::to_string(n) + "," + std::to_string(j) + ") z-overlap " +
                     std::to_string(s) + " > " + to_string(bound);
        }
      }
    }
    if (r.pass) r.detail = "max |s|=" + std::to_string(worst);
    out.push_back(r);
  }
  if (want("C7")) {
    // Only a finite prefix is visible: require chi strictly decreasing.
    ConditionReport r{"C7", true, "chi strictly decreasing on prefix"};
    for (int n = 2; n <= N; ++n)
      if (fam.param(n).chi >= fam.param(n - 1).chi && r.pass) {
        r.pass = false;
        r.detail = "chi(" + std::to_string(n) + ")=" + std::to_string(fam.param(n).chi) +
                   " not below chi(" + std::to_string(n - 1) + ")";
      }
    out.push_back(r);
  }
  if (want("C8")) {
    ConditionReport r{"C8", true, ""};
    std::optional<Rational> margin;
    for (int n = 1; n <= N; ++n) {
      const auto& p = fam.param(n);
      Rational half(1, 2);
      Rational g = gamma_of(p.k, p.lambda, p.mu, p.nu);
      Rational lhs = Rational(3 - 3 * p.chi) * p.mu + Rational(1 - p.chi) * p.nu;
      Rational m = std::min(half - g, half - g - lhs);
      if (!margin || m < *margin) margin = m;
      if (m <= 0 && r.pass) {
        r.pass = false;
        r.detail = "n=" + std::to_string(n) + " gamma=" + to_string(g) + " slack " + to_string(m);
      }
    }
    if (r.pass) r.detail = "min margin " + (margin ? to_string(*margin) : std::string("none"));
    out.push_back(r);
  }
  if (want("C9")) {
    ConditionReport r{"C9", true, ""};
    std::optional<Rational> margin;
    for (int n = 1; n <= N; ++n) {
      Rational weight = weight_of(fam, n);
      for (int i = 1; i < n; ++i) {
        if (fam.relator(i).kind != RelatorKind::first) continue;
        Rational m = weight - Rational(static_cast<long long>(fam.relator(i).core_len));
        if (!margin || m < *margin) margin = m;
        if (m <= 0 && r.pass) {
          r.pass = false;
          r.detail = "|w_" + std::to_string(i) + "|=" + std::to_string(fam.relator(i).core_len) +
                     " not below weight of r_" + std::to_string(n) + " = " + to_string(weight);
        }
      }
    }
    if (r.pass) r.detail = "min margin " + (margin ? to_string(*margin) : std::string("vacuous"));
    out.push_back(r);
  }
  if (want("C10")) {
    ConditionReport r{"C10", true, ""};
    std::optional<Rational> margin;
    for (int n = 1; n <= N; ++n) {
      Rational m = weight_of(fam, n) - Rational(static_cast<long long>(fam.v.size()));
      if (!margin || m < *margin) margin = m;
      if (m <= 0 && r.pass) {
        r.pass = false;
        r.detail = "n=" + std::to_string(n) + " margin " + to_string(m);
      }
    }
    if (r.pass) r.detail = "min margin " + (margin ? to_string(*margin) : std::string("none"));
    out.push_back(r);
  }
  if (want("C12")) {
    ConditionReport r{"C12", true, "no proper powers"};
    for (int n = 1; n <= N && r.pass; ++n)
      if (auto pp = is_proper_power(fam.relator(n).word)) {
        r.pass = false;
        std::string root = format_word(pp->root);
        if (root.size() > 40) root = root.substr(0, 40) + "...";
        r.detail = "r_" + std::to_string(n) + " = conjugate of (" + root + ")^" + std::to_string(pp->exponent);
      }
    out.push_back(r);
  }
  return out;
}

Membership decide_index_set(PresentationFamily& fam, int n, const WordSolver& solver) {
  auto& slot = fam.in_I[static_cast<std::size_t>(n - 1)];
  if (slot != Membership::unknown) return slot;
  const Relator& r = fam.relator(n);
  if (r.kind == RelatorKind::second) return slot = Membership::in;
  std::vector<int> kept;
  for (int i = 1; i < n; ++i) {
    Membership m = decide_index_set(fam, i, solver);
    if (m == Membership::unknown) return Membership::unknown;
    if (m == Membership::in) kept.push_back(i);
  }
  switch (solver(kept, r.core_block())) {
    case WordVerdict::trivial: return slot = Membership::out;
    case WordVerdict::nontrivial: return slot = Membership::in;
    case WordVerdict::undecided: return Membership::unknown;
  }
  return Membership::unknown;
}

std::string write_presentation(const PresentationFamily& fam) {
  std::ostringstream os;
  os << "presentation v1\n";
  os << "seed-v " << format_word(fam.v) << "\n";
  for (const auto& p : fam.params)
    os << "param " << p.n << " k=" << p.k << " M=" << p.M << " lambda=" << to_string(p.lambda)
       << " mu=" << to_string(p.mu) << " nu=" << to_string(p.nu) << " chi=" << p.chi << "\n";
  for (int n = 1; n <= fam.size(); ++n) {
    const auto& r = fam.relator(n);
    Membership m = fam.in_I[static_cast<std::size_t>(n - 1)];
    os << "relator " << n << " kind=" << static_cast<int>(r.kind)
       << " in-I=" << (m == Membership::in ? "1" : m == Membership::out ? "0" : "?") << " "
       << format_word(r.word) << "\n";
  }
  return os.str();
}

namespace {

std::map<std::string, std::string> key_values(std::istringstream& ls, std::vector<std::string>& bare) {
  std::map<std::string, std::string> kv;
  std::string tok;
  while (ls >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      bare.push_back(tok);
    else
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

long long to_ll(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer for " + what + ": '" + s + "'");
  }
}

}  // namespace

PresentationFamily read_presentation(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "presentation v1") throw ParseError("missing 'presentation v1' header");
  PresentationFamily fam;
  bool have_v = false;
  struct Raw {
    RelatorKind kind;
    Membership m;
    GroupWord w;
  };
  std::map<int, Raw> raws;
  std::map<int, ParamSet> params;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    auto where = " (line " + std::to_string(lineno) + ")";
    if (head == "seed-v") {
      std::string w;
      ls >> w;
      fam.v = parse_word(w);
      have_v = true;
    } else if (head == "param") {
      std::string nstr;
      ls >> nstr;
      int n = static_cast<int>(to_ll(nstr, "index"));
      std::vector<std::string> bare;
      auto kv = key_values(ls, bare);
      for (const char* key : {"k", "M", "lambda", "mu", "nu", "chi"})
        if (!kv.count(key)) throw ParseError(std::string("param missing ") + key + where);
      ParamSet p;
      p.n = n;
      p.k = static_cast<int>(to_ll(kv["k"], "k"));
      p.kappa = 2 * p.k;
      p.M = to_ll(kv["M"], "M");
      p.lambda = parse_rational(kv["lambda"]);
      p.mu = parse_rational(kv["mu"]);
      p.nu = parse_rational(kv["nu"]);
      p.chi = static_cast<int>(to_ll(kv["chi"], "chi"));
      p.gamma = gamma_of(p.k, p.lambda, p.mu, p.nu);
      if (params.count(n)) throw ParseError("duplicate param line" + where);
      params[n] = p;
    } else if (head == "relator") {
      std::string nstr;
      ls >> nstr;
      int n = static_cast<int>(to_ll(nstr, "index"));
      std::vector<std::string> bare;
      auto kv = key_values(ls, bare);
      if (!kv.count("kind") || !kv.count("in-I")) throw ParseError("relator missing kind or in-I" + where);
      Raw r;
      if (kv["kind"] == "1")
        r.kind = RelatorKind::first;
      else if (kv["kind"] == "2")
        r.kind = RelatorKind::second;
      else
        throw ParseError("bad kind" + where);
      const std::string& m = kv["in-I"];
      r.m = m == "1" ? Membership::in : m == "0" ? Membership::out : m == "?" ? Membership::unknown
                                                                          : throw ParseError("bad in-I" + where);
      if (bare.size() > 1) throw ParseError("extra tokens" + where);
      r.w = bare.empty() ? GroupWord{} : parse_word(bare[0]);
      if (raws.count(n)) throw ParseError("duplicate relator" + where);
      raws.emplace(n, std::move(r));
    } else {
      throw ParseError("unknown line '" + head + "'" + where);
    }
  }
  if (!have_v) throw ParseError("missing seed-v");
  int N = static_cast<int>(raws.size());
  for (int n = 1; n <= N; ++n) {
    if (!raws.count(n) || !params.count(n)) throw ParseError("indices must be 1.." + std::to_string(N) + " with params");
    const auto& p = params[n];
    auto& raw = raws.at(n);
    auto rel = relator_from_word(n, raw.kind, raw.w, p.k, p.M, static_cast<std::int64_t>(fam.v.size()));
    if (!rel) throw ParseError("relator " + std::to_string(n) + " does not match the block layout");
    fam.params.push_back(p);
    fam.relators.push_back(std::move(*rel));
    fam.in_I.push_back(raw.m);
  }
  if (params.size() != raws.size()) throw ParseError("param lines without relators");
  return fam;
}

}  // namespace vkd
