#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vkd {

// A binary relation R between A = {0..a_size-1} and B = {0..b_size-1},
// optionally with a capacity f(y) on every y in B.
struct RelationInstance {
  int a_size = 0;
  int b_size = 0;
  std::vector<std::pair<int, int>> pairs;
  std::optional<std::vector<int>> capacity;
};

struct MatchResult {
  bool ok = false;
  std::vector<int> h;          // h[x] in B when ok
  std::vector<int> deficient;  // X with capacity of R(X) below |X| when !ok
};

// R(X) as a sorted list.
std::vector<int> image_of(const RelationInstance& inst, const std::vector<int>& X);

// Injection with x R h(x), or a set X with |R(X)| < |X|.
MatchResult hall_injection(const RelationInstance& inst);

// Map with x R h(x) and |h^-1(y)| <= f(y), or X with sum f over R(X) < |X|.
MatchResult capacitated_assignment(const RelationInstance& inst);

// Re-check a result against the instance.
bool validate_result(const RelationInstance& inst, const MatchResult& r);

// Text form "A=x,y; B=p,q; R=x:p,y:p; f=p:2,q:1" (f optional).
struct NamedInstance {
  std::vector<std::string> a_names, b_names;
  RelationInstance inst;
};
NamedInstance parse_instance(std::string_view text);
std::string format_result(const NamedInstance& ni, const MatchResult& r);

}  // namespace vkd
