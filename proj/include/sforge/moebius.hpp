#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "sforge/error.hpp"
#include "sforge/graph.hpp"
#include "sforge/ring.hpp"

namespace sforge {

// Point (u : w) of the projective line; w = 0 is infinity.
template <class T>
struct ProjectivePoint {
  T u;
  T w;

  static ProjectivePoint finite(const T& z) { return {z, ring_traits<T>::one_like(z)}; }
  static ProjectivePoint infinity(const T& like = T{}) {
    return {ring_traits<T>::one_like(like), ring_traits<T>::zero_like(like)};
  }

  bool is_infinity() const { return ring_traits<T>::is_zero(w); }

  // u/w; requires w to be a unit.
  T affine() const {
    if (!ring_traits<T>::is_unit(w)) throw domain_error("point is not in the affine chart");
    return u * ring_inverse(w);
  }
};

template <class T>
T det2(const ProjectivePoint<T>& p, const ProjectivePoint<T>& q) {
  return p.u * q.w - q.u * p.w;
}

// Scales so that a unit coordinate becomes 1 (w preferred).
template <class T>
ProjectivePoint<T> normalized(const ProjectivePoint<T>& p) {
  if constexpr (std::is_same_v<T, Complex>) {
    if (p.w == Complex(0.0)) {
      if (p.u == Complex(0.0)) throw domain_error("zero projective vector");
      return {1.0, 0.0};
    }
    return {p.u / p.w, 1.0};
  } else {
    if (ring_traits<T>::is_unit(p.w)) return {p.u * ring_inverse(p.w), ring_traits<T>::one_like(p.w)};
    if (ring_traits<T>::is_unit(p.u)) return {ring_traits<T>::one_like(p.u), p.w * ring_inverse(p.u)};
    throw domain_error("projective point has no unit coordinate");
  }
}

template <class T>
bool same_point(const ProjectivePoint<T>& p, const ProjectivePoint<T>& q, double tol = 1e-12) {
  if constexpr (std::is_same_v<T, Complex>) {
    double s = std::max(std::abs(p.u), std::abs(p.w)) * std::max(std::abs(q.u), std::abs(q.w));
    return std::abs(det2(p, q)) <= tol * s;
  } else {
    (void)tol;
    return ring_traits<T>::is_zero(det2(p, q));
  }
}

// z -> (a z + b)/(c z + d), kept unnormalized.
template <class T>
struct Moebius {
  T a, b, c, d;

  static Moebius identity(const T& like = T{}) {
    auto one = ring_traits<T>::one_like(like), zero = ring_traits<T>::zero_like(like);
    return {one, zero, zero, one};
  }

  T det() const { return a * d - b * c; }
  T trace() const { return a + d; }

  friend Moebius operator*(const Moebius& m, const Moebius& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }

  // Projective inverse (adjugate).
  Moebius inverse() const { return {d, -b, -c, a}; }

  ProjectivePoint<T> apply(const ProjectivePoint<T>& p) const { return {a * p.u + b * p.w, c * p.u + d * p.w}; }
  ProjectivePoint<T> apply(const T& z) const { return {a * z + b, c * z + d}; }

  // d/dz at a finite z; requires c z + d to be a unit.
  T derivative(const T& z) const {
    T den = c * z + d;
    if (!ring_traits<T>::is_unit(den)) throw domain_error("pole of derivative");
    T inv = ring_inverse(den);
    return det() * inv * inv;
  }
};

template <class T>
Moebius<T> scaled(const Moebius<T>& m, const T& s) {
  return {m.a * s, m.b * s, m.c * s, m.d * s};
}

// The atom with (phi(z) - x+)/(z - x+) = y (phi(z) - x-)/(z - x-).
template <class T>
Moebius<T> phi_edge(const ProjectivePoint<T>& xp, const ProjectivePoint<T>& xm, const T& y) {
  T dm = det2(xp, xm);
  if (!ring_traits<T>::is_unit(dm)) throw domain_error("degenerate edge parameters: x_e and x_-e coincide");
  T one = ring_traits<T>::one_like(y);
  Moebius<T> m{xp.u * xm.w - y * xm.u * xp.w, xp.u * xm.u * (y - one), xp.w * xm.w * (one - y),
               y * xm.w * xp.u - xp.w * xm.u};
  return scaled(m, ring_inverse(dm));
}

// [a, b; c, d] = (a - c)(b - d) / ((a - d)(b - c)).
template <class T>
T cross_ratio(const ProjectivePoint<T>& a, const ProjectivePoint<T>& b, const ProjectivePoint<T>& c,
              const ProjectivePoint<T>& d) {
  T den = det2(a, d) * det2(b, c);
  if (!ring_traits<T>::is_unit(den)) throw domain_error("degenerate cross-ratio");
  if constexpr (std::is_same_v<T, Complex>)
    if (std::abs(den) == 0.0) throw domain_error("degenerate cross-ratio");
  return det2(a, c) * det2(b, d) * ring_inverse(den);
}

template <class T>
struct FixedPoints {
  ProjectivePoint<T> attractive;
  ProjectivePoint<T> repulsive;
  T multiplier;  // derivative at the attractive point, |.| < 1
};

namespace detail {

// det may be supplied when known exactly (products of unit-determinant maps).
inline FixedPoints<Complex> fixed_points_complex(const Moebius<Complex>& m, double margin,
                                                 std::optional<Complex> known_det = std::nullopt) {
  Complex det = known_det ? *known_det : m.det();
  if (det == Complex(0.0)) throw domain_error("singular Moebius matrix");
  Complex tr = m.trace();
  Complex disc = std::sqrt(tr * tr - 4.0 * det);
  Complex l1 = (tr + disc) / 2.0, l2 = (tr - disc) / 2.0;
  if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
  l2 = det / l1;
  Complex beta = l2 / l1;
  if (!(std::abs(beta) < margin)) throw domain_error("Moebius map is not loxodromic");
  auto eigvec = [&](Complex l) {
    ProjectivePoint<Complex> p{m.b, l - m.a}, q{l - m.d, m.c};
    double np = std::abs(p.u) + std::abs(p.w), nq = std::abs(q.u) + std::abs(q.w);
    return normalized(np >= nq ? p : q);
  };
  if (!known_det) return {eigvec(l1), eigvec(l2), beta};
  // repulsive point as the attracting eigenvector of the adjugate
  Moebius<Complex> adj{m.d, -m.b, -m.c, m.a};
  Complex k1 = det / l2;
  ProjectivePoint<Complex> p{adj.b, k1 - adj.a}, q{k1 - adj.d, adj.c};
  double np = std::abs(p.u) + std::abs(p.w), nq = std::abs(q.u) + std::abs(q.w);
  return {eigvec(l1), normalized(np >= nq ? p : q), beta};
}

inline bool rational_sqrt(const Rational& x, Rational& root) {
  if (x < 0) return false;
  mpz_class n = x.get_num(), d = x.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

inline FixedPoints<Rational> fixed_points_rational(const Moebius<Rational>& m) {
  Rational det = m.det();
  if (det == 0) throw domain_error("singular Moebius matrix");
  Rational tr = m.trace();
  Rational root;
  if (!rational_sqrt(tr * tr - 4 * det, root)) throw domain_error("fixed points are not rational");
  Rational l1 = (tr + root) / 2, l2 = (tr - root) / 2;
  if (abs(l2) > abs(l1)) std::swap(l1, l2);
  if (abs(l1) == abs(l2)) throw domain_error("Moebius map is not loxodromic");
  auto eigvec = [&](const Rational& l) {
    ProjectivePoint<Rational> p{m.b, l - m.a}, q{l - m.d, m.c};
    return normalized((p.u != 0 || p.w != 0) ? p : q);
  };
  return {eigvec(l1), eigvec(l2), Rational(l2 / l1)};
}

// Attracting fixed point for a map whose constant-term matrix has rank one and nonzero trace.
inline ProjectivePoint<TruncatedSeries> attract_series(const Moebius<TruncatedSeries>& m) {
  Rational a0 = m.a.constant_term(), b0 = m.b.constant_term(), c0 = m.c.constant_term(), d0 = m.d.constant_term();
  if (a0 * d0 - b0 * c0 != 0) throw domain_error("Moebius map is not loxodromic (unit determinant)");
  if (a0 + d0 == 0) throw domain_error("Moebius map is not loxodromic in reduced form");
  const auto& sp = m.a.space();
  ProjectivePoint<TruncatedSeries> z =
      (a0 != 0 || c0 != 0) ? ProjectivePoint<TruncatedSeries>{TruncatedSeries(sp, a0), TruncatedSeries(sp, c0)}
                           : ProjectivePoint<TruncatedSeries>{TruncatedSeries(sp, b0), TruncatedSeries(sp, d0)};
  z = normalized(z);
  const int steps = m.a.cutoff() + 2;
  for (int i = 0; i < steps; ++i) z = normalized(m.apply(z));
  if (!same_point(m.apply(z), z)) throw domain_error("fixed-point iteration did not converge");
  return z;
}

inline TruncatedSeries eigenvalue_at(const Moebius<TruncatedSeries>& m, const ProjectivePoint<TruncatedSeries>& p) {
  if (p.w.is_unit()) return m.c * p.u * p.w.inverse() + m.d;
  return m.a + m.b * p.w * p.u.inverse();
}

inline FixedPoints<TruncatedSeries> fixed_points_series(const Moebius<TruncatedSeries>& m) {
  auto att = attract_series(m);
  auto rep = attract_series(m.inverse());
  TruncatedSeries lam = eigenvalue_at(m, att);
  TruncatedSeries beta = m.det() * (lam * lam).inverse();
  return {att, rep, beta};
}

}  // namespace detail

// Largest |multiplier| accepted over C.
inline constexpr double default_loxodromy_margin = 0.95;

template <class T>
FixedPoints<T> fixed_points(const Moebius<T>& m, double margin = default_loxodromy_margin) {
  if constexpr (std::is_same_v<T, Complex>)
    return detail::fixed_points_complex(m, margin);
  else if constexpr (std::is_same_v<T, Rational>)
    return detail::fixed_points_rational(m);
  else
    return detail::fixed_points_series(m);
}

template <class T>
T multiplier(const Moebius<T>& m, double margin = default_loxodromy_margin) {
  return fixed_points(m, margin).multiplier;
}

// rho = h(1)...h(l) maps to phi_{h(l)} ... phi_{h(1)}.
template <class T, class AtomFn>
Moebius<T> word_to_map(const EdgePath& path, AtomFn&& atom, const T& like = T{}) {
  if (!is_reduced(path)) throw domain_error("path not reduced");
  Moebius<T> m = Moebius<T>::identity(like);
  for (int code : path) m = atom(code) * m;
  return m;
}

}  // namespace sforge
