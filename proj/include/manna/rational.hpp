#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>

#include "manna/errors.hpp"

namespace manna {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Division (rather than the two-argument constructor) so that negative or
// non-reduced inputs are canonicalized instead of rejected.
inline Rat make_rational(const Int& num, const Int& den) {
  require(den != 0, Errc::zero_denominator, "zero denominator");
  return Rat(num) / Rat(den);
}

// Accepts "123", "-7/4", "0.25" (optionally signed). Everything else,
// including "1/0", is rejected.
inline Rat parse_rational(const std::string& text) {
  auto bad = [&text]() { fail(Errc::bad_value, "not a rational literal: '" + text + "'"); };
  std::size_t pos = 0;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    neg = text[pos] == '-';
    ++pos;
  }
  auto digits = [&](std::size_t& p) {
    std::size_t start = p;
    while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
    if (p == start) bad();
    return text.substr(start, p - start);
  };
  Int num(digits(pos));
  Int den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    den = Int(digits(pos));
    require(den != 0, Errc::zero_denominator, "zero denominator in '" + text + "'");
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    for (char c : digits(pos)) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
  }
  if (pos != text.size()) bad();
  Rat r = Rat(num) / Rat(den);
  return neg ? Rat(-r) : r;
}

inline std::string format_rational(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

}  // namespace manna
