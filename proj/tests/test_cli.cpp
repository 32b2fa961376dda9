#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "vkd/smap.hpp"

namespace {

const std::string kCli = VKD_CLI;
const std::string kFix = VKD_FIXTURES;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  std::string cmd = kCli + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Relator words replaced by their lengths.
std::string summarize(const std::string& pres) {
  std::istringstream in(pres);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("relator ", 0) == 0) {
      auto cut = line.rfind(' ');
      line = line.substr(0, cut) + " length=" + std::to_string(line.size() - cut - 1);
    }
    out += line + "\n";
  }
  return out;
}

const std::string& pres2() {
  static const std::string path = [] {
    std::string p = "cli_pres2.txt";
    REQUIRE(run("gen --n 2 --out " + p).code == 0);
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("gen is deterministic and matches the golden summary") {
  REQUIRE(run("gen --n 4 --out cli_a.txt").code == 0);
  REQUIRE(run("gen --n 4 --out cli_b.txt").code == 0);
  std::string a = slurp("cli_a.txt");
  CHECK(a == slurp("cli_b.txt"));
  CHECK(summarize(a) == slurp(kFix + "/gen4_summary.txt"));
  auto one = run("gen --n 1");
  CHECK(one.code == 0);
  CHECK(one.out.find("param 1 k=4 ") != std::string::npos);
  CHECK(run("gen --n 0").code == 2);
}

TEST_CASE("check") {
  auto r = run("check --pres " + pres2());
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(run("check --pres " + pres2() + " --conditions C11").code == 2);
  CHECK(run("check --pres " + kFix + "/torus.diagram").code == 2);
  // sabotage: nu of index 2 raised to 1/2
  std::string text = slurp(pres2());
  auto pos = text.find("nu=1/10");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 7, "nu=1/2");
  std::ofstream("cli_sabotaged.txt", std::ios::binary) << text;
  auto bad = run("check --pres cli_sabotaged.txt");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("CHECK C8 FAIL n=2") != std::string::npos);
}

TEST_CASE("solve") {
  auto a = run("solve word --pres " + pres2() + " --word a");
  CHECK(a.code == 1);
  CHECK(a.out.rfind("nontrivial", 0) == 0);
  auto e = run("solve word --pres " + pres2() + " --word \"\"");
  CHECK(e.code == 0);
  CHECK(e.out.rfind("trivial", 0) == 0);
  auto c = run("solve conj --w1 ab --w2 ba --cert cli_conj.diagram");
  CHECK(c.code == 0);
  CHECK(c.out.rfind("conjugate", 0) == 0);
  CHECK(run("diagram validate cli_conj.diagram").code == 0);
  CHECK(run("solve conj --w1 ab --w2 aB").code == 1);
  CHECK(run("solve word --rel 1=aaa --word aa").code == 3);
  CHECK(run("solve word --rel 1=aaa --word aa --assert-isoperimetric").code == 1);
  auto t = run("solve word --rel 1=aaa --word bAAAB --assert-isoperimetric --cert cli_word.diagram");
  CHECK(t.code == 0);
  CHECK(run("diagram validate cli_word.diagram --rel 1=aaa").code == 0);
  CHECK(run("diagram validate cli_word.diagram").code == 1);
  CHECK(run("solve word --word xyz").code == 2);
  CHECK(run("solve").code == 2);
}

TEST_CASE("diagram verbs") {
  auto t = run("diagram classify " + kFix + "/torus.diagram");
  CHECK(t.code == 0);
  CHECK(t.out == "orientable genus 1\n");
  auto p = run("diagram classify " + kFix + "/rp2.diagram --bounds");
  CHECK(p.out == "non-orientable genus 1\ncl-bound none sql-bound 1\n");
  auto reg = run("diagram regularize " + kFix + "/regularize_in.diagram");
  CHECK(reg.code == 0);
  CHECK(reg.out == slurp(kFix + "/regularize_out.diagram"));
  auto mv = run("diagram move " + kFix + "/torus.diagram --d1 1 --d2 2");
  CHECK(mv.code == 1);
  CHECK(mv.out.find("precondition") != std::string::npos);
  CHECK(run("diagram validate " + kFix + "/regularize_in.diagram --rel 1=aaa").code == 0);
  CHECK(run("diagram validate " + kFix + "/gen4_summary.txt").code == 2);
  CHECK(run("diagram reduce " + kFix + "/regularize_out.diagram --out cli_reduced.diagram").code == 0);
  CHECK(run("diagram validate cli_reduced.diagram --rel 1=aaa").code == 0);
  CHECK(run("diagram smap-check " + kFix + "/regularize_out.diagram").code == 2);
}

TEST_CASE("smap-check on a toy disc") {
  auto rel = vkd::relator_table(vkd::toy_family());
  std::ofstream("cli_toy_disc.diagram", std::ios::binary) << vkd::write_diagram(vkd::disc_diagram(rel.at(1), 1));
  auto r = run("diagram smap-check cli_toy_disc.diagram --toy");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("CHECK Y holds\nCHECK D holds\nCHECK Z2 holds\nCHECK exceptional-arcs holds\nCHECK lemma46 holds", 0) == 0);
  CHECK(run("diagram validate cli_toy_disc.diagram --toy").code == 0);
}

TEST_CASE("emitted files round-trip") {
  for (const char* f : {"torus.diagram", "rp2.diagram", "regularize_in.diagram", "regularize_out.diagram"}) {
    auto r = run(std::string("diagram regularize ") + kFix + "/" + f + " --out cli_rt.diagram");
    CHECK(r.code == 0);
    CHECK(run("diagram validate cli_rt.diagram --rel 1=aaa").code == 0);
  }
}

TEST_CASE("match and oracle") {
  auto m = run("match --instance \"A=x,y; B=p; R=x:p,y:p\"");
  CHECK(m.code == 1);
  CHECK(m.out.find("deficient") != std::string::npos);
  CHECK(run("match --instance \"A=x,y; B=p; R=x:p,y:p; f=p:2\"").code == 0);
  CHECK(run("match --instance \"A=x; Q=1\"").code == 2);
  CHECK(run("oracle --rel 1=abAB --word baBA").code == 0);
  auto o = run("oracle --word abA --radius 2");
  CHECK(o.code == 1);
  CHECK(o.out == "nontrivial-within-radius\n");
}
