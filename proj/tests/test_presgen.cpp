#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "vkd/presgen.hpp"

using namespace vkd;

namespace {

const PresentationFamily& family4() {
  static const PresentationFamily fam = generate_family(4);
  return fam;
}

std::set<std::string> all_checkable() {
  return {all_condition_names().begin(), all_condition_names().end()};
}

}  // namespace

TEST_CASE("params for n=1") {
  ParamSet p = make_params(1, 1);
  CHECK(p.k == 4);
  CHECK(p.kappa == 8);
  CHECK(p.nu == Rational(1, 8));
  CHECK(p.chi == 0);
  CHECK(p.lambda == Rational(1, 368));
  CHECK(p.mu == Rational(1, 368));
  CHECK(p.gamma == Rational(7, 23));
  // 3 mu + nu = 49/368 against 1/2 - 7/23 = 72/368
  CHECK(Rational(3) * p.mu + p.nu == Rational(49, 368));
  CHECK(Rational(1, 2) - p.gamma == Rational(72, 368));
  CHECK(Rational(3 - 3 * p.chi) * p.mu + Rational(1 - p.chi) * p.nu < Rational(1, 2) - p.gamma);
}

TEST_CASE("closed-form lambda and mu satisfy the main inequality for n <= 32") {
  for (int n = 1; n <= 32; ++n) {
    ParamSet p = make_params(n, 1);
    Rational half(1, 2);
    // gamma recomputed from scratch
    Rational g = p.lambda + Rational(3 + 2 * 2 * p.k) * p.mu + Rational(2) * p.nu;
    CHECK(g == p.gamma);
    CHECK(g < half);
    CHECK(Rational(3 - 3 * p.chi) * p.mu + Rational(1 - p.chi) * p.nu < half - g);
  }
  CHECK(make_params(5, 1).chi == -4);
  CHECK(make_params(5, 1).chi < make_params(1, 1).chi);
}

TEST_CASE("condition enumeration") {
  auto c1 = enumerate_conditions(1);
  CHECK(c1.kind == RelatorKind::first);
  CHECK(c1.w.empty());
  CHECK(c1.x == 0);
  auto c2 = enumerate_conditions(2);
  CHECK(c2.kind == RelatorKind::second);
  CHECK(c2.w.empty());
  CHECK(c2.m == 1);
  auto c3 = enumerate_conditions(3);
  CHECK(c3.kind == RelatorKind::first);
  CHECK(c3.w.empty());
  CHECK(c3.x == 1);
  // first-kind pairs and second-kind pairs are each hit once
  std::set<std::pair<std::string, int>> firsts;
  std::set<std::pair<std::string, std::int64_t>> seconds;
  for (int n = 1; n <= 400; ++n) {
    auto c = enumerate_conditions(n);
    if (c.kind == RelatorKind::first)
      CHECK(firsts.insert({format_word(c.w), c.x}).second);
    else
      CHECK(seconds.insert({format_word(c.w), c.m}).second);
  }
  // (w, m) diagonal: (0,1),(1,1),(0,2),(2,1),(1,2),(0,3)
  CHECK(format_word(enumerate_conditions(4).w) == "a");
  CHECK(enumerate_conditions(4).m == 1);
  CHECK(enumerate_conditions(6).w.empty());
  CHECK(enumerate_conditions(6).m == 2);
}

TEST_CASE("build_u") {
  GroupWord u = build_u(1, 4, 1);
  CHECK(format_word(u) == "abbbbbbbbaabbbbbbb");
  CHECK(u.size() == 18);
  for (int i = 1; i <= 5; ++i) {
    GroupWord w = build_u(i, 5, 3);
    CHECK(static_cast<std::int64_t>(w.size()) == u_length(5, 3));
    CHECK(u_length(5, 3) == 2 * 3 * (2 * 3 * 5 + 1));
    CHECK(is_reduced(w));
    for (Letter l : w) CHECK(l.sign() == 1);
  }
}

TEST_CASE("relator layout") {
  GroupWord v = parse_word("ab");
  ParamSet p = make_params(1, 2);
  auto spec = enumerate_conditions(1);
  Relator r = build_relator(p, spec, v);
  std::int64_t U = u_length(p.k, p.M);
  CHECK(static_cast<std::int64_t>(r.word.size()) == 2 * p.k * U + p.k * 0 + 1);
  // stored unreduced
  CHECK_FALSE(is_reduced(r.word));
  CHECK(format_word(free_reduce(r.word)) == "A");
  CHECK(r.locate(0).kind == BlockRef::u_block);
  CHECK(r.locate(U).kind == BlockRef::u_inverse);
  CHECK(r.locate(2 * U).j == 2);
  CHECK(r.locate(static_cast<std::int64_t>(r.word.size()) - 1).kind == BlockRef::tail);

  ConditionSpec s2;
  s2.n = 2;
  s2.kind = RelatorKind::second;
  s2.w = parse_word("aB");
  s2.m = 3;
  ParamSet p2 = make_params(2, 1);
  Relator r2 = build_relator(p2, s2, v);
  CHECK(r2.tail_len == 3 * p2.k * 2);
  CHECK(static_cast<std::int64_t>(r2.word.size()) == p2.k * (2 * r2.u_len + 2) + r2.tail_len);
  auto back = relator_from_word(2, RelatorKind::second, r2.word, p2.k, p2.M, 2);
  REQUIRE(back);
  CHECK(back->tail_len == r2.tail_len);
  GroupWord broken = r2.word;
  broken[static_cast<std::size_t>(r2.u_inverse_start(1))] = kA;
  CHECK_FALSE(relator_from_word(2, RelatorKind::second, broken, p2.k, p2.M, 2));
}

TEST_CASE("generated family passes its conditions") {
  const auto& fam = family4();
  REQUIRE(fam.size() == 4);
  for (int n = 1; n <= 4; ++n) {
    CHECK(fam.param(n).M * fam.param(n).k > (n > 1 ? fam.param(n - 1).M * fam.param(n - 1).k : 0));
    CHECK(weight_of(fam, n) >= Rational(n));
    const auto& r = fam.relator(n);
    CHECK(r.u_len == 2 * fam.param(n).M * (2 * fam.param(n).M * fam.param(n).k + 1));
  }
  for (const auto& rep : check_conditions(fam, 4, all_checkable())) {
    INFO(rep.name << " " << rep.detail);
    CHECK(rep.pass);
  }
  CHECK_THROWS_AS(check_conditions(fam, 4, {"C11"}), std::invalid_argument);
}

TEST_CASE("M is the smallest feasible value") {
  const auto& fam = family4();
  for (int n = 1; n <= 3; ++n) {
    PresentationFamily prefix;
    prefix.v = fam.v;
    for (int i = 1; i < n; ++i) {
      prefix.params.push_back(fam.param(i));
      prefix.relators.push_back(fam.relator(i));
      prefix.in_I.push_back(Membership::unknown);
    }
    std::int64_t M = fam.param(n).M;
    std::int64_t floor_M = n > 1 ? fam.param(n - 1).M * fam.param(n - 1).k / (3 + n) + 1 : 1;
    if (M - 1 < floor_M) continue;
    // one below: build and check directly
    PresentationFamily trial = prefix;
    ParamSet p = make_params(n, M - 1);
    trial.params.push_back(p);
    trial.relators.push_back(build_relator(p, enumerate_conditions(n), fam.v));
    trial.in_I.push_back(Membership::unknown);
    bool all = true;
    for (const auto& rep : check_conditions(trial, n, {"C3", "C5", "C6", "C9", "C10"})) all = all && rep.pass;
    all = all && weight_of(trial, n) >= Rational(n);
    CHECK_FALSE(all);
  }
}

TEST_CASE("sabotaged family fails with a witness") {
  GenOptions opt;
  opt.force_M = 1;
  auto fam = generate_family(3, opt);
  auto reps = check_conditions(fam, 3, {"C5", "C9"});
  bool failed = false;
  for (const auto& r : reps)
    if (!r.pass) {
      failed = true;
      CHECK(r.detail.find("u(") != std::string::npos);
    }
  CHECK(failed);
}

TEST_CASE("C12 catches a proper power") {
  auto fam = family4();
  Relator fake = fam.relator(1);
  fake.word = parse_word("ababab");
  fam.relators.push_back(fake);
  fam.params.push_back(fam.param(1));
  fam.in_I.push_back(Membership::unknown);
  auto reps = check_conditions(fam, 5, {"C12"});
  REQUIRE(reps.size() == 1);
  CHECK_FALSE(reps[0].pass);
  CHECK(reps[0].detail.find("(ab)^3") != std::string::npos);
}

TEST_CASE("overlap bounds against letter-level oracles for n <= 2") {
  const auto& fam = family4();
  std::vector<std::vector<GroupWord>> us(3);
  for (int n = 1; n <= 2; ++n)
    for (int j = 1; j <= fam.relator(n).k; ++j) us[n].push_back(fam.relator(n).u_block(j));
  for (int n = 1; n <= 2; ++n) {
    auto text = oracle::symbols(us[n]);
    oracle::SuffixAutomaton sam(text.size());
    for (int c : text) sam.extend(c);
    std::int64_t rep = sam.longest_repeat(text);
    std::int64_t Mk = fam.param(n).M * fam.param(n).k;
    CHECK(rep <= 4 * Mk + 1);
    // the run-length scan must find the same value
    std::int64_t fast = 0;
    for (std::size_t i = 0; i < us[n].size(); ++i)
      for (std::size_t j = i; j < us[n].size(); ++j)
        fast = std::max(fast, max_common_subword(us[n][i], us[n][j], i == j).length);
    CHECK(fast == rep);
    for (const auto& u : us[n]) {
      std::int64_t z = oracle::z_overlap(u);
      CHECK(z <= 4 * Mk + 4);
      CHECK(z == max_z_overlap(u));
    }
  }
  auto t1 = oracle::symbols(us[1]);
  oracle::SuffixAutomaton sam1(t1.size());
  for (int c : t1) sam1.extend(c);
  std::int64_t cross = sam1.longest_common(oracle::symbols(us[2]));
  CHECK(cross <= 4 * fam.param(1).M * fam.param(1).k + 1);
}

TEST_CASE("presentation file round trip and determinism") {
  const auto& fam = family4();
  std::string text = write_presentation(fam);
  auto back = read_presentation(text);
  CHECK(write_presentation(back) == text);
  CHECK(write_presentation(generate_family(4)) == text);
  CHECK_THROWS_AS(read_presentation("presentation v2\n"), ParseError);
  CHECK_THROWS_AS(read_presentation("presentation v1\nseed-v ab\nrelator 1 kind=1 in-I=? ab\n"), ParseError);
  std::string bad = text;
  bad[bad.rfind(' ') + 5] = bad[bad.rfind(' ') + 5] == 'a' ? 'b' : 'a';
  CHECK_THROWS_AS(read_presentation(bad), ParseError);
}

TEST_CASE("index set with a free-group solver") {
  auto fam = family4();
  // A solver that only knows free reduction; enough while no relator fits.
  WordSolver free_only = [](const std::vector<int>&, const GroupWord& w) {
    return free_reduce(w).empty() ? WordVerdict::trivial : WordVerdict::nontrivial;
  };
  CHECK(decide_index_set(fam, 1, free_only) == Membership::out);
  CHECK(decide_index_set(fam, 2, free_only) == Membership::in);
  CHECK(decide_index_set(fam, 3, free_only) == Membership::out);
  CHECK(decide_index_set(fam, 4, free_only) == Membership::in);
  WordSolver stuck = [](const std::vector<int>&, const GroupWord&) { return WordVerdict::undecided; };
  auto fresh = family4();
  CHECK(decide_index_set(fresh, 1, stuck) == Membership::unknown);
  CHECK(decide_index_set(fresh, 2, stuck) == Membership::in);
}
