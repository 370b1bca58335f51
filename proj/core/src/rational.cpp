#include "lanedit/rational.hpp"

#include "lanedit/errors.hpp"

#include <cctype>
#include <cmath>

namespace lanedit {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_bigint(std::string_view s) {
  if (!all_digits(s)) throw InvalidArgument("not a non-negative integer: " + std::string(s));
  return BigInt(std::string(s));
}

double log2_bigint(const BigInt& v) {
  // scale down to keep the mantissa in double range
  std::size_t bits = boost::multiprecision::msb(v) + 1;
  if (bits <= 1000) return std::log2(v.convert_to<double>());
  std::size_t shift = bits - 64;
  BigInt top = v >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational r;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_bigint(s.substr(0, slash));
    BigInt den = parse_bigint(s.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator: " + std::string(text));
    r = Rational(num, den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw InvalidArgument("bad number: " + std::string(text));
    BigInt num = ip.empty() ? BigInt(0) : parse_bigint(ip);
    BigInt den = 1;
    for (char c : fp) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw InvalidArgument("bad number: " + std::string(text));
      num = num * 10 + (c - '0');
      den *= 10;
    }
    r = Rational(num, den);
  } else {
    r = Rational(parse_bigint(s));
  }
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

double log2_rational(const Rational& r) {
  if (r <= 0) throw InvalidArgument("log2 of non-positive rational");
  return log2_bigint(numerator(r)) - log2_bigint(denominator(r));
}

}  // namespace lanedit
