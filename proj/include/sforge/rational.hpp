#pragma once

#include <gmpxx.h>

#include <string>

#include "sforge/error.hpp"

namespace sforge {

using Rational = mpq_class;

// Accepts "p", "p/q" and finite decimals such as "-0.125".
inline Rational parse_rational(const std::string& text) {
  std::string s = text;
  if (s.empty()) throw input_error("empty rational literal");
  auto dot = s.find('.');
  Rational r;
  try {
    if (dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw input_error("bad rational literal: " + text);
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      std::size_t scale = s.size() - dot - 1;
      if (digits == "-" || digits == "+" || digits.empty()) throw input_error("bad rational literal: " + text);
      if (digits[0] == '+') digits.erase(0, 1);
      mpz_class num(digits, 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
      r = Rational(num, den);
    } else {
      if (s[0] == '+') s.erase(0, 1);
      if (r.set_str(s, 10) != 0) throw input_error("bad rational literal: " + text);
    }
  } catch (const std::invalid_argument&) {
    throw input_error("bad rational literal: " + text);
  }
  if (r.get_den() == 0) throw input_error("zero denominator: " + text);
  r.canonicalize();
  return r;
}

inline Rational frac(long num, long den) {
  if (den == 0) throw domain_error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

}  // namespace sforge
