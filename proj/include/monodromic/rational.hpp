#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "monodromic/errors.hpp"

namespace monodromic {

// Exact arbitrary-precision arithmetic everywhere; no floating point.
// cpp_rational keeps values canonical: reduced, denominator positive.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

// Floor of a rational, as an Integer.
inline Integer rational_floor(const Rational& r) {
  Integer n = num(r), d = den(r);
  Integer q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

inline Integer rational_ceil(const Rational& r) {
  Integer n = num(r), d = den(r);
  Integer q = n / d;
  if (n % d != 0 && n > 0) ++q;
  return q;
}

inline long to_long(const Integer& i) { return static_cast<long>(i); }

// Canonical text form: "p/q", or just "p" when the denominator is 1.
inline std::string rational_to_string(const Rational& r) {
  if (is_integer(r)) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

// Accepts "p" or "p/q" with optional leading minus; anything else is a
// SchemaError (this is the document-level number syntax).
inline Rational parse_rational(const std::string& s) {
  auto is_int_token = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!is_int_token(s)) throw SchemaError("malformed rational '" + s + "'");
    return Rational(Integer(s));
  }
  std::string p = s.substr(0, slash), q = s.substr(slash + 1);
  if (!is_int_token(p) || !is_int_token(q))
    throw SchemaError("malformed rational '" + s + "'");
  Integer qi(q);
  if (qi == 0) throw SchemaError("zero denominator in rational '" + s + "'");
  return Rational(Integer(p), qi);
}

}  // namespace monodromic
