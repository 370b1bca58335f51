#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace lanedit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a plain decimal ("0.25") into an exact rational.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

/// log2 of a positive rational, accurate for numerators and denominators of any size.
double log2_rational(const Rational& r);

}  // namespace lanedit
