#pragma once

#include <boost/rational.hpp>
#include <string>
#include <string_view>

namespace vkd {

using Rational = boost::rational<long long>;

std::string to_string(const Rational& q);
// Accepts "p/q" or an integer.
Rational parse_rational(std::string_view s);

}  // namespace vkd
