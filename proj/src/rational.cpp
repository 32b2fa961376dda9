#include "vkd/rational.hpp"

#include <charconv>

#include "vkd/words.hpp"

namespace vkd {

std::string to_string(const Rational& q) {
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

namespace {

long long parse_int(std::string_view s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("bad integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(s));
  long long den = parse_int(s.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator");
  return Rational(parse_int(s.substr(0, slash)), den);
}

}  // namespace vkd
