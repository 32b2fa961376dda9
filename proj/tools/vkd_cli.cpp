#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vkd/diagram.hpp"
#include "vkd/matching.hpp"
#include "vkd/presgen.hpp"
#include "vkd/smap.hpp"
#include "vkd/solver.hpp"
#include "vkd/surface.hpp"

using namespace vkd;

namespace {

enum Exit { kYes = 0, kNo = 1, kUsage = 2, kUndecided = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + out);
  f << text;
}

// Where relators come from: a presentation file, the toy family, or words.
struct RelatorSource {
  std::string pres;
  bool toy = false;
  std::vector<std::string> rel;

  void add(CLI::App* app) {
    app->add_option("--pres", pres, "presentation file");
    app->add_flag("--toy", toy, "use the built-in toy family");
    app->add_option("--rel", rel, "relator as <index>=<word>, repeatable");
  }
  std::optional<PresentationFamily> family() const {
    if (pres.empty()) return std::nullopt;
    return read_presentation(slurp(pres));
  }
  RelatorTable table() const {
    RelatorTable t;
    if (auto fam = family())
      for (int n = 1; n <= fam->size(); ++n) t[n] = fam->relator(n).word;
    if (toy) t = relator_table(toy_family());
    for (const auto& r : rel) {
      auto eq = r.find('=');
      if (eq == std::string::npos) throw UsageError("relator must be <index>=<word>: " + r);
      int id = 0;
      try {
        id = std::stoi(r.substr(0, eq));
      } catch (const std::exception&) {
        throw UsageError("bad relator index: " + r);
      }
      t[id] = parse_word(r.substr(eq + 1));
    }
    return t;
  }
  RelatorLayouts layouts() const {
    if (auto fam = family()) return layouts_of(*fam);
    if (toy) return toy_family();
    throw UsageError("S-map checks need --pres or --toy");
  }
  Weights weights() const {
    if (auto fam = family()) return family_weights(*fam);
    return measure_weights(toy_family());
  }
};

std::vector<int> all_faces(const CombMap& m) {
  std::vector<int> v(static_cast<std::size_t>(m.num_faces()));
  for (int f = 0; f < m.num_faces(); ++f) v[static_cast<std::size_t>(f)] = f;
  return v;
}

int cmd_gen(int n_max, const std::string& out, long long m_cap) {
  if (n_max < 1) throw UsageError("--n must be at least 1");
  GenOptions opt;
  opt.M_cap = m_cap;
  PresentationFamily fam = generate_family(n_max, opt);
  for (int n = 1; n <= n_max; ++n) decide_index_set(fam, n, family_word_solver(fam));
  emit(write_presentation(fam), out);
  return kYes;
}

int cmd_check(const std::string& pres, const std::vector<std::string>& conds, int N) {
  PresentationFamily fam = read_presentation(slurp(pres));
  std::set<std::string> which(conds.begin(), conds.end());
  if (which.empty()) which.insert(all_condition_names().begin(), all_condition_names().end());
  if (N <= 0) N = fam.size();
  bool all = true;
  for (const auto& rep : check_conditions(fam, N, which)) {
    std::cout << "CHECK " << rep.name << ' ' << (rep.pass ? "PASS" : "FAIL");
    if (!rep.detail.empty()) std::cout << ' ' << rep.detail;
    std::cout << '\n';
    all = all && rep.pass;
  }
  return all ? kYes : kNo;
}

int word_exit(WordVerdict v) {
  switch (v) {
    case WordVerdict::trivial:
      return kYes;
    case WordVerdict::nontrivial:
      return kNo;
    case WordVerdict::undecided:
      return kUndecided;
  }
  return kUndecided;
}

int cmd_solve_word(const RelatorSource& src, const std::string& word, const SolveOptions& opt, const std::string& cert) {
  GroupWord w = parse_word(word);
  WordResult r;
  if (auto fam = src.family())
    r = solve_word(*fam, w, opt);
  else if (src.toy || !src.rel.empty())
    r = solve_word(foreign_presentation(src.table()), w, opt);
  else
    r = solve_word(empty_presentation(), w, opt);
  std::cout << word_verdict_name(r.verdict);
  if (!r.note.empty()) std::cout << " (" << r.note << ")";
  std::cout << '\n';
  if (r.certificate && !cert.empty()) emit(write_diagram(*r.certificate), cert);
  return word_exit(r.verdict);
}

int cmd_solve_conj(const RelatorSource& src, const std::string& w1, const std::string& w2, const SolveOptions& opt,
                   const std::string& cert) {
  GroupWord a = parse_word(w1), b = parse_word(w2);
  ConjResult r;
  if (auto fam = src.family())
    r = solve_conjugacy(*fam, a, b, opt);
  else if (src.toy || !src.rel.empty())
    r = solve_conjugacy(foreign_presentation(src.table()), a, b, opt);
  else
    r = solve_conjugacy(empty_presentation(), a, b, opt);
  std::cout << conj_verdict_name(r.verdict);
  if (!r.note.empty()) std::cout << " (" << r.note << ")";
  std::cout << '\n';
  if (r.certificate && !cert.empty()) emit(write_diagram(*r.certificate), cert);
  switch (r.verdict) {
    case ConjVerdict::conjugate:
      return kYes;
    case ConjVerdict::not_conjugate:
      return kNo;
    case ConjVerdict::undecided:
      return kUndecided;
  }
  return kUndecided;
}

Diagram load_diagram(const std::string& path) { return read_diagram(slurp(path)); }

int cmd_validate(const std::string& file, const RelatorSource& src) {
  Diagram d = load_diagram(file);
  auto err = d.augmented() ? validate_augmented(d, src.table()) : validate_diagram(d, src.table());
  if (err) {
    std::cout << "invalid: " << *err << '\n';
    return kNo;
  }
  std::cout << "valid\n";
  return kYes;
}

int cmd_move(const std::string& file, int d1, int d2, const std::string& out) {
  Diagram d = load_diagram(file);
  if (auto err = diamond_precondition(d, d1, d2)) {
    std::cerr << "precondition: " << *err << '\n';
    return kNo;
  }
  MoveResult r = apply_diamond(d, d1, d2);
  std::cerr << "move " << move_kind_name(r.kind) << " vertex-delta " << r.vertex_delta << '\n';
  emit(write_diagram(r.diagram), out);
  return kYes;
}

int cmd_reduce(const std::string& file, const ReduceOptions& opt, const std::string& out) {
  ReduceResult r = reduce(load_diagram(file), opt);
  std::cerr << "reduce moves " << r.moves << " stripped " << r.stripped << (r.clean ? "" : " cut-by-breadth") << '\n';
  emit(write_diagram(r.diagram), out);
  return r.clean ? kYes : kUndecided;
}

int cmd_classify(const std::string& file, bool bounds) {
  Diagram d = load_diagram(file);
  CombMap c = closure(d.map);
  if (auto err = validate(c)) throw UsageError("closure is not a valid map: " + *err);
  if (components(c).size() != 1) throw UsageError("classify needs a connected diagram");
  SurfaceClass s = classify_closed(c);
  std::cout << (s.orientable ? "orientable" : "non-orientable") << " genus " << s.genus << '\n';
  if (bounds && d.map.num_contours() == 1) {
    GenusCertificate g = genus_certificates(d);
    std::cout << "cl-bound " << (g.cl_bound ? std::to_string(*g.cl_bound) : "none") << " sql-bound "
              << (g.sql_bound ? std::to_string(*g.sql_bound) : "none") << '\n';
  }
  return kYes;
}

int cmd_smap_check(const std::string& file, const RelatorSource& src, bool with_closure) {
  Diagram d = load_diagram(file);
  SMap s = derive_smap(d, src.layouts(), with_closure);
  Weights w = src.weights();
  std::vector<int> faces = all_faces(s.map);
  std::vector<CheckResult> results{check_Y(s, faces), check_D(s, faces, w), check_Z2(s, faces),
                                   estimate_exceptional(s, faces).result, lemma46_check(s, w)};
  bool ok = true;
  for (const auto& r : results) {
    std::cout << format_check(r) << '\n';
    ok = ok && r.status != CheckResult::violated;
  }
  return ok ? kYes : kNo;
}

int cmd_match(const std::string& text, const std::string& file) {
  if (text.empty() == file.empty()) throw UsageError("give exactly one of --instance and --file");
  NamedInstance ni = parse_instance(text.empty() ? slurp(file) : text);
  MatchResult r = ni.inst.capacity ? capacitated_assignment(ni.inst) : hall_injection(ni.inst);
  std::cout << format_result(ni, r) << '\n';
  return r.ok ? kYes : kNo;
}

int cmd_oracle(const RelatorSource& src, const std::string& word, const OracleOptions& opt) {
  OracleVerdict v = oracle_word(src.table(), parse_word(word), opt);
  std::cout << oracle_verdict_name(v) << '\n';
  switch (v) {
    case OracleVerdict::trivial:
      return kYes;
    case OracleVerdict::nontrivial_within_radius:
      return kNo;
    case OracleVerdict::unknown:
      return kUndecided;
  }
  return kUndecided;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"van Kampen diagram toolkit"};
  app.require_subcommand(1);
  int code = kUsage;

  auto* gen = app.add_subcommand("gen", "generate a presentation file");
  int n_max = 0;
  long long m_cap = GenOptions{}.M_cap;
  std::string out;
  gen->add_option("--n", n_max, "number of relators")->required();
  gen->add_option("--m-cap", m_cap, "largest M tried per index");
  gen->add_option("--out", out, "output file (default stdout)");

  auto* check = app.add_subcommand("check", "check the conditions on a presentation file");
  std::string pres;
  std::vector<std::string> conds;
  int check_n = 0;
  check->add_option("--pres", pres, "presentation file")->required();
  check->add_option("--conditions", conds, "condition names (default all)")->delimiter(',');
  check->add_option("--N", check_n, "indices 1..N (default all)");

  auto* solve = app.add_subcommand("solve", "word and conjugacy problems");
  solve->require_subcommand(1);
  RelatorSource src;
  SolveOptions sopt;
  std::string word, w1, w2, cert;
  auto* sword = solve->add_subcommand("word", "is the word trivial");
  src.add(sword);
  sword->add_option("--word", word, "word over a, b, A, B")->required();
  sword->add_option("--cert", cert, "write the certificate diagram here");
  sword->add_option("--node-cap", sopt.node_cap, "search states before giving up");
  sword->add_flag("--assert-isoperimetric", sopt.assert_isoperimetric, "trust a foreign presentation");
  auto* sconj = solve->add_subcommand("conj", "are the words conjugate");
  RelatorSource csrc;
  csrc.add(sconj);
  sconj->add_option("--w1", w1, "first word")->required();
  sconj->add_option("--w2", w2, "second word")->required();
  sconj->add_option("--cert", cert, "write the certificate diagram here");
  sconj->add_option("--node-cap", sopt.node_cap, "search states before giving up");
  sconj->add_flag("--assert-isoperimetric", sopt.assert_isoperimetric, "trust a foreign presentation");

  auto* diag = app.add_subcommand("diagram", "diagram file operations");
  diag->require_subcommand(1);
  std::string file;
  RelatorSource dsrc;
  auto* dval = diag->add_subcommand("validate", "validate a diagram file");
  dval->add_option("file", file, "diagram file")->required();
  dsrc.add(dval);
  auto* dreg = diag->add_subcommand("regularize", "collapse auxiliary edges and faces");
  dreg->add_option("file", file, "diagram file")->required();
  dreg->add_option("--out", out, "output file (default stdout)");
  auto* dmove = diag->add_subcommand("move", "apply a diamond move");
  int d1 = 0, d2 = 0;
  dmove->add_option("file", file, "diagram file")->required();
  dmove->add_option("--d1", d1, "first dart (signed edge id)")->required();
  dmove->add_option("--d2", d2, "second dart (signed edge id)")->required();
  dmove->add_option("--out", out, "output file (default stdout)");
  auto* dred = diag->add_subcommand("reduce", "reduce by moves and cancellations");
  ReduceOptions ropt;
  dred->add_option("file", file, "diagram file")->required();
  dred->add_option("--depth", ropt.depth, "move lookahead");
  dred->add_option("--breadth", ropt.breadth, "candidates kept per level");
  dred->add_option("--out", out, "output file (default stdout)");
  auto* dcls = diag->add_subcommand("classify", "classify the closed surface of a diagram");
  bool bounds = false;
  dcls->add_option("file", file, "diagram file")->required();
  dcls->add_flag("--bounds", bounds, "also print the cl and sql bounds");
  auto* dsm = diag->add_subcommand("smap-check", "run the S-map checks on a diagram");
  bool with_closure = false;
  dsm->add_option("file", file, "diagram file")->required();
  dsm->add_flag("--closure", with_closure, "add the contours as outer faces");
  RelatorSource ssrc;
  ssrc.add(dsm);

  auto* match = app.add_subcommand("match", "Hall injection or capacitated assignment");
  std::string instance;
  match->add_option("--instance", instance, "instance text 'A=..; B=..; R=..; f=..'");
  match->add_option("--file", file, "instance file");

  auto* orc = app.add_subcommand("oracle", "bounded search for a triviality proof");
  RelatorSource osrc;
  OracleOptions oopt;
  osrc.add(orc);
  orc->add_option("--word", word, "word over a, b, A, B")->required();
  orc->add_option("--radius", oopt.radius, "conjugator length and depth");
  orc->add_option("--insert-cap", oopt.insert_len_cap, "insert only into words this short");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*gen) code = cmd_gen(n_max, out, m_cap);
    if (*check) code = cmd_check(pres, conds, check_n);
    if (*sword) code = cmd_solve_word(src, word, sopt, cert);
    if (*sconj) code = cmd_solve_conj(csrc, w1, w2, sopt, cert);
    if (*dval) code = cmd_validate(file, dsrc);
    if (*dreg) {
      emit(write_diagram(regularize(load_diagram(file))), out);
      code = kYes;
    }
    if (*dmove) code = cmd_move(file, d1, d2, out);
    if (*dred) code = cmd_reduce(file, ropt, out);
    if (*dcls) code = cmd_classify(file, bounds);
    if (*dsm) code = cmd_smap_check(file, ssrc, with_closure);
    if (*match) code = cmd_match(instance, file);
    if (*orc) code = cmd_oracle(osrc, word, oopt);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return code;
}
