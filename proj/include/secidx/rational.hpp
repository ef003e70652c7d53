#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace secidx {

/// Exact arbitrary-precision rational, always kept in lowest terms.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "a/b" with b >= 1, e.g. "0/1", "1/2", "3/1".
std::string format_rational(const Rational& q);

/// Accepts "a", "a/b" and "-a/b". Throws ParseError(Malformed) otherwise.
Rational parse_rational(std::string_view text);

}  // namespace secidx
