#include "vkd/matching.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "vkd/words.hpp"

namespace vkd {

namespace {

struct Matcher {
  const RelationInstance& inst;
  std::vector<std::vector<int>> adj;
  std::vector<int> cap;
  std::vector<std::vector<int>> assigned;  // per y
  std::vector<int> h;
  std::vector<char> seen_b, seen_a;

  Matcher(const RelationInstance& in, std::vector<int> c)
      : inst(in), adj(static_cast<std::size_t>(in.a_size)), cap(std::move(c)),
        assigned(static_cast<std::size_t>(in.b_size)), h(static_cast<std::size_t>(in.a_size), -1) {
    for (auto [x, y] : inst.pairs) adj[static_cast<std::size_t>(x)].push_back(y);
    for (auto& l : adj) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
  }

  bool augment(int x) {
    seen_a[static_cast<std::size_t>(x)] = 1;
    for (int y : adj[static_cast<std::size_t>(x)]) {
      auto yi = static_cast<std::size_t>(y);
      if (seen_b[yi]) continue;
      seen_b[yi] = 1;
      if (static_cast<int>(assigned[yi].size()) < cap[yi]) {
        assigned[yi].push_back(x);
        h[static_cast<std::size_t>(x)] = y;
        return true;
      }
      for (std::size_t k = 0; k < assigned[yi].size(); ++k) {
        int other = assigned[yi][k];
        if (seen_a[static_cast<std::size_t>(other)]) continue;
        if (augment(other)) {
          assigned[yi][k] = x;
          h[static_cast<std::size_t>(x)] = y;
          return true;
        }
      }
    }
    return false;
  }

  MatchResult run() {
    MatchResult r;
    for (int x = 0; x < inst.a_size; ++x) {
      seen_b.assign(static_cast<std::size_t>(inst.b_size), 0);
      seen_a.assign(static_cast<std::size_t>(inst.a_size), 0);
      if (!augment(x)) {
        // Everything the failed search touched is a Hall violator.
        for (int a = 0; a < inst.a_size; ++a)
          if (seen_a[static_cast<std::size_t>(a)]) r.deficient.push_back(a);
        return r;
      }
    }
    r.ok = true;
    r.h = h;
    return r;
  }
};

}  // namespace

std::vector<int> image_of(const RelationInstance& inst, const std::vector<int>& X) {
  std::vector<char> in(static_cast<std::size_t>(inst.a_size), 0);
  for (int x : X) in[static_cast<std::size_t>(x)] = 1;
  std::vector<int> out;
  for (auto [x, y] : inst.pairs)
    if (in[static_cast<std::size_t>(x)]) out.push_back(y);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MatchResult hall_injection(const RelationInstance& inst) {
  Matcher m(inst, std::vector<int>(static_cast<std::size_t>(inst.b_size), 1));
  return m.run();
}

MatchResult capacitated_assignment(const RelationInstance& inst) {
  std::vector<int> cap = inst.capacity ? *inst.capacity
                                       : std::vector<int>(static_cast<std::size_t>(inst.b_size), 1);
  Matcher m(inst, cap);
  return m.run();
}

bool validate_result(const RelationInstance& inst, const MatchResult& r) {
  std::vector<int> cap = inst.capacity ? *inst.capacity
                                       : std::vector<int>(static_cast<std::size_t>(inst.b_size), 1);
  if (r.ok) {
    if (static_cast<int>(r.h.size()) != inst.a_size) return false;
    std::vector<int> load(static_cast<std::size_t>(inst.b_size), 0);
    for (int x = 0; x < inst.a_size; ++x) {
      int y = r.h[static_cast<std::size_t>(x)];
      if (y < 0 || y >= inst.b_size) return false;
      if (std::find(inst.pairs.begin(), inst.pairs.end(), std::make_pair(x, y)) == inst.pairs.end())
        return false;
      if (++load[static_cast<std::size_t>(y)] > cap[static_cast<std::size_t>(y)]) return false;
    }
    return true;
  }
  if (r.deficient.empty()) return false;
  long total = 0;
  for (int y : image_of(inst, r.deficient)) total += cap[static_cast<std::size_t>(y)];
  return total < static_cast<long>(r.deficient.size());
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      std::string t = trim(s.substr(start, i - start));
      if (!t.empty()) out.push_back(t);
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

NamedInstance parse_instance(std::string_view text) {
  NamedInstance ni;
  std::map<std::string, int> ai, bi;
  std::vector<std::pair<std::string, std::string>> rel, caps;
  bool have_f = false;
  for (const std::string& clause : split(text, ';')) {
    auto eq = clause.find('=');
    if (eq == std::string::npos) throw ParseError("clause without '=': " + clause);
    std::string key = trim(std::string_view(clause).substr(0, eq));
    auto items = split(std::string_view(clause).substr(eq + 1), ',');
    if (key == "A") {
      for (auto& x : items) {
        if (ai.count(x)) throw ParseError("duplicate element " + x);
        ai[x] = static_cast<int>(ni.a_names.size());
        ni.a_names.push_back(x);
      }
    } else if (key == "B") {
      for (auto& y : items) {
        if (bi.count(y)) throw ParseError("duplicate element " + y);
        bi[y] = static_cast<int>(ni.b_names.size());
        ni.b_names.push_back(y);
      }
    } else if (key == "R" || key == "f") {
      for (auto& it : items) {
        auto c = it.find(':');
        if (c == std::string::npos) throw ParseError("expected x:y in " + it);
        (key == "R" ? rel : caps).emplace_back(trim(std::string_view(it).substr(0, c)),
                                               trim(std::string_view(it).substr(c + 1)));
      }
      if (key == "f") have_f = true;
    } else {
      throw ParseError("unknown clause " + key);
    }
  }
  ni.inst.a_size = static_cast<int>(ni.a_names.size());
  ni.inst.b_size = static_cast<int>(ni.b_names.size());
  for (auto& [x, y] : rel) {
    if (!ai.count(x) || !bi.count(y)) throw ParseError("relation names unknown element " + x + ":" + y);
    ni.inst.pairs.emplace_back(ai[x], bi[y]);
  }
  if (have_f) {
    std::vector<int> cap(static_cast<std::size_t>(ni.inst.b_size), 0);
    for (auto& [y, v] : caps) {
      if (!bi.count(y)) throw ParseError("capacity for unknown element " + y);
      try {
        cap[static_cast<std::size_t>(bi[y])] = std::stoi(v);
      } catch (const std::exception&) {
        throw ParseError("bad capacity " + v);
      }
      if (cap[static_cast<std::size_t>(bi[y])] < 0) throw ParseError("negative capacity");
    }
    ni.inst.capacity = cap;
  }
  return ni;
}

std::string format_result(const NamedInstance& ni, const MatchResult& r) {
  std::ostringstream os;
  if (r.ok) {
    os << "assignment";
    for (std::size_t x = 0; x < r.h.size(); ++x)
      os << ' ' << ni.a_names[x] << "->" << ni.b_names[static_cast<std::size_t>(r.h[x])];
  } else {
    os << "deficient X=";
    for (std::size_t i = 0; i < r.deficient.size(); ++i)
      os << (i ? "," : "") << ni.a_names[static_cast<std::size_t>(r.deficient[i])];
    os << " R(X)=";
    auto img = image_of(ni.inst, r.deficient);
    for (std::size_t i = 0; i < img.size(); ++i)
      os << (i ? "," : "") << ni.b_names[static_cast<std::size_t>(img[i])];
  }
  return os.str();
}

}  // namespace vkd
