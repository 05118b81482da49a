#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "sforge/error.hpp"
#include "sforge/rational.hpp"
#include "sforge/series.hpp"

namespace sforge {

using Complex = std::complex<double>;

// Uniform access to the three coefficient rings. `like` carries context (series space).
template <class T>
struct ring_traits;

template <>
struct ring_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
  static Rational from_rational(const Rational& q, const Rational& = {}) { return q; }
  static Rational zero_like(const Rational& = {}) { return 0; }
  static Rational one_like(const Rational& = {}) { return 1; }
  static bool is_zero(const Rational& x) { return x == 0; }
  static bool is_unit(const Rational& x) { return x != 0; }
  static Rational inverse(const Rational& x) {
    if (x == 0) throw domain_error("division by zero");
    return 1 / x;
  }
};

template <>
struct ring_traits<Complex> {
  static constexpr bool exact = false;
  static constexpr const char* name = "complex";
  static Complex from_rational(const Rational& q, const Complex& = {}) { return {q.get_d(), 0.0}; }
  static Complex zero_like(const Complex& = {}) { return 0.0; }
  static Complex one_like(const Complex& = {}) { return 1.0; }
  static bool is_zero(const Complex& x) { return x == Complex(0.0); }
  static bool is_unit(const Complex& x) { return std::isfinite(std::abs(x)) && x != Complex(0.0); }
  static Complex inverse(const Complex& x) {
    if (!is_unit(x)) throw domain_error("division by zero");
    return 1.0 / x;
  }
};

template <>
struct ring_traits<TruncatedSeries> {
  static constexpr bool exact = true;
  static constexpr const char* name = "series";
  static TruncatedSeries from_rational(const Rational& q, const TruncatedSeries& like = {}) {
    return TruncatedSeries(like.space(), q);
  }
  static TruncatedSeries zero_like(const TruncatedSeries& like = {}) { return TruncatedSeries(like.space()); }
  static TruncatedSeries one_like(const TruncatedSeries& like = {}) {
    return TruncatedSeries(like.space(), Rational(1));
  }
  static bool is_zero(const TruncatedSeries& x) { return x.is_zero(); }
  static bool is_unit(const TruncatedSeries& x) { return x.is_unit(); }
  static TruncatedSeries inverse(const TruncatedSeries& x) { return x.inverse(); }
};

template <class T>
T ring_inverse(const T& x) {
  return ring_traits<T>::inverse(x);
}

}  // namespace sforge
