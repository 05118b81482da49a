#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sforge/differentials.hpp"
#include "sforge/linalg.hpp"
#include "sforge/params.hpp"

namespace sforge {

template <class T>
struct PeriodMatrix {
  Matrix<T> P;
  int L = 0;
  std::string ring;
};

// P_ij = beta_i^{[i=j]} * prod over double-coset representatives gamma (gamma != 1 when i = j)
// of the cross-ratio [alpha_i, alpha_{-i}; gamma alpha_j, gamma alpha_{-j}].
template <class T>
PeriodMatrix<T> period_matrix(const SchottkyGroup<T>& grp, int L) {
  const int g = grp.genus();
  PeriodMatrix<T> out{Matrix<T>(g, std::vector<T>(g, grp.like())), L, ring_traits<T>::name};
  for (int i = 1; i <= g; ++i)
    for (int j = 1; j <= g; ++j) {
      auto reps = double_coset_reps(g, i, j, L);
      if (i == j) reps.erase(std::remove(reps.begin(), reps.end(), Word{}), reps.end());
      auto factors = parallel_map<T>(reps.size(), [&](std::size_t n) -> T {
        try {
          return cross_ratio(grp.alpha(i), grp.alpha(-i), grp.image_of_alpha(reps[n], j),
                             grp.image_of_alpha(reps[n], -j));
        } catch (const domain_error& e) {
          throw domain_error(std::string(e.what()) + " at word " + word_to_string(reps[n]));
        }
      });
      T p = i == j ? grp.beta(i) : ring_traits<T>::one_like(grp.like());
      for (const auto& f : factors) p = p * f;
      out.P[i - 1][j - 1] = p;
    }
  return out;
}

// ---- contours over C ----

// Isometric circles of gamma_1, gamma_1^{-1}, ..., gamma_g^{-1}; empty when some generator fixes infinity.
inline std::vector<Circle> generator_circles(const SchottkyGroup<Complex>& grp) {
  std::vector<Circle> out;
  for (int i = 1; i <= grp.genus(); ++i)
    for (int s : {1, -1}) {
      auto m = grp.generator(s * i);
      if (m.c == Complex(0.0)) return {};
      out.push_back(isometric_circle(m));
    }
  return out;
}

using ComplexFn = std::function<Complex(const Complex&)>;

struct QuadratureOptions {
  double tol = 1e-12;       // circle rule, relative
  double path_tol = 1e-10;  // Gauss-Kronrod, relative to the L1 norm
  int max_points = 1 << 16;
};

// Counterclockwise integral over a circle; trapezoidal rule with doubling.
inline Complex circle_integral(const ComplexFn& f, Complex center, double radius, const QuadratureOptions& q = {}) {
  auto trap = [&](int n) {
    Complex s = 0;
    for (int k = 0; k < n; ++k) {
      Complex e = std::polar(1.0, 2 * M_PI * k / n);
      s += f(center + radius * e) * e;
    }
    return s * Complex(0, 2 * M_PI * radius / n);
  };
  Complex prev = trap(64);
  for (int n = 128; n <= q.max_points; n *= 2) {
    Complex cur = trap(n);
    if (std::abs(cur - prev) <= q.tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw domain_error("contour integral did not converge; change the contour radius");
}

// Integral over the a-cycle a_j: counterclockwise around the isometric circle of gamma_j^{-1},
// which encloses alpha_j.
inline Complex a_cycle_integral_of(const SchottkyGroup<Complex>& grp, int j, const ComplexFn& f,
                                   const QuadratureOptions& q = {}) {
  check_generator_index(grp.genus(), j);
  Complex center;
  double radius;
  auto circles = generator_circles(grp);
  if (circles.empty()) {
    if (grp.alpha(j).is_infinity()) throw domain_error("a-cycle around infinity is not supported");
    center = grp.alpha(j).affine();
    radius = std::pow(std::abs(grp.beta(j)), 0.4);
  } else {
    const Circle& c = circles[2 * (j - 1) + 1];
    center = c.center;
    radius = c.radius * (1.0 + grp.options().circle_margin / 2);
  }
  try {
    return circle_integral(f, center, radius, q);
  } catch (const domain_error& e) {
    throw domain_error(std::string(e.what()) + " (a-cycle contour; change the contour radius)");
  }
}

inline Complex a_cycle_integral(const SchottkyGroup<Complex>& grp, int i, int j, int L, const QuadratureOptions& q = {}) {
  FirstKind<Complex> w(grp, i, L);
  return a_cycle_integral_of(grp, j, std::cref(w), q);
}

namespace detail {

inline double segment_distance(Complex c, Complex a, Complex b) {
  Complex d = b - a;
  double t = std::norm(d) > 0 ? std::clamp(std::real((c - a) * std::conj(d)) / std::norm(d), 0.0, 1.0) : 0.0;
  return std::abs(c - (a + t * d));
}

inline bool leaves_outward(Complex from, Complex to, const Circle& c) {
  return std::real((to - from) * std::conj(from - c.center)) > 0;
}

// Integral of f along z(t), t in [0, 1], with z'(t) supplied.
template <class Z, class DZ>
Complex path_integral(const ComplexFn& f, Z z, DZ dz, double tol) {
  auto integrand = [&](double t) { return f(z(t)) * dz(t); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, tol);
}

struct BPathPlan {
  double score = -1;  // clearance from the other discs; <= 0 means no admissible path
  Complex p, q;
};

// Picks p on the isometric circle of gamma_j so that [z0, p] and [p, gamma_j p] stay clear of the discs.
inline BPathPlan plan_b_path(const SchottkyGroup<Complex>& grp, const std::vector<Circle>& circles, int j, Complex z0) {
  BPathPlan best;
  for (const auto& c : circles)
    if (std::abs(z0 - c.center) <= c.radius) return best;
  auto gj = grp.generator(j);
  const std::size_t own = 2 * (j - 1), image = own + 1;
  for (int k = 0; k < 256; ++k) {
    Complex cand = circles[own].center + circles[own].radius * std::polar(1.0, 2 * M_PI * k / 256);
    Complex img = gj.apply(ProjectivePoint<Complex>::finite(cand)).affine();
    if (!leaves_outward(cand, z0, circles[own]) || !leaves_outward(cand, img, circles[own]) ||
        !leaves_outward(img, cand, circles[image]))
      continue;
    double score = 1e300;
    for (std::size_t c = 0; c < circles.size(); ++c) {
      if (c != own) score = std::min(score, segment_distance(circles[c].center, z0, cand) - circles[c].radius);
      if (c != own && c != image)
        score = std::min(score, segment_distance(circles[c].center, cand, img) - circles[c].radius);
    }
    if (score > best.score) best = {score, cand, img};
  }
  return best;
}

}  // namespace detail

// Base point for b-paths: the candidate near the fixed points with the widest admissible paths.
inline Complex default_base_point(const SchottkyGroup<Complex>& grp) {
  auto circles = generator_circles(grp);
  Complex centroid = 0;
  int count = 0;
  for (int i = 1; i <= grp.genus(); ++i)
    for (int s : {1, -1})
      if (!grp.alpha(s * i).is_infinity()) {
        centroid += grp.alpha(s * i).affine();
        ++count;
      }
  if (count) centroid /= double(count);
  // a generator fixing infinity (genus 1): stay off the orbit radii |beta|^k
  if (circles.empty()) return centroid + std::pow(std::abs(grp.beta(1)), 1.0 / 3) * std::polar(1.0, M_PI / 7);
  double spread = 0;
  for (const auto& c : circles) spread = std::max(spread, std::abs(c.center - centroid) + c.radius);
  Complex best = centroid;
  double best_score = -1;
  for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0, 1.5}) {
    for (int k = 0; k < (rho == 0.0 ? 1 : 16); ++k) {
      Complex z = centroid + rho * spread * std::polar(1.0, 2 * M_PI * (k + 0.5) / 16);
      double score = 1e300;
      for (int j = 1; j <= grp.genus(); ++j) score = std::min(score, detail::plan_b_path(grp, circles, j, z).score);
      if (score > best_score) {
        best_score = score;
        best = z;
      }
    }
  }
  if (best_score <= 0) throw domain_error("no admissible base point found; pass one explicitly");
  return best;
}

// Integral over the b-cycle b_j: from z0 to gamma_j(z0) by z0 -> p -> gamma_j(p) -> gamma_j(z0),
// where p lies on the isometric circle of gamma_j and the last leg is the image of [p, z0].
inline Complex b_path_integral(const SchottkyGroup<Complex>& grp, int j, Complex z0, const ComplexFn& f,
                               const QuadratureOptions& q = {}) {
  check_generator_index(grp.genus(), j);
  auto gj = grp.generator(j);
  auto circles = generator_circles(grp);
  if (circles.empty()) {
    Complex z1 = gj.apply(ProjectivePoint<Complex>::finite(z0)).affine();
    return detail::path_integral(f, [&](double t) { return z0 + t * (z1 - z0); }, [&](double) { return z1 - z0; },
                                 q.path_tol);
  }
  auto plan = detail::plan_b_path(grp, circles, j, z0);
  if (plan.score <= 0) throw domain_error("b-path collides with an isometric disc; choose another base point");
  const Complex p = plan.p, pq = plan.q;
  try {
    Complex s = detail::path_integral(f, [&](double t) { return z0 + t * (p - z0); }, [&](double) { return p - z0; },
                                      q.path_tol);
    s += detail::path_integral(f, [&](double t) { return p + t * (pq - p); }, [&](double) { return pq - p; }, q.path_tol);
    s += detail::path_integral(
        f, [&](double t) { return gj.apply(ProjectivePoint<Complex>::finite(p + t * (z0 - p))).affine(); },
        [&](double t) { return gj.derivative(p + t * (z0 - p)) * (z0 - p); }, q.path_tol);
    return s;
  } catch (const domain_error& e) {
    throw domain_error(std::string(e.what()) + " on the b-path; choose another base point");
  }
}

inline Complex b_period_numeric(const SchottkyGroup<Complex>& grp, int i, int j, Complex z0, int L,
                                const QuadratureOptions& q = {}) {
  FirstKind<Complex> w(grp, i, L);
  return b_path_integral(grp, j, z0, std::cref(w), q);
}

// ---- second-kind periods and the eta basis ----

// b_i-period of omega_{t,k}: sum over Gamma/<gamma_i> of F(delta alpha_i) - F(delta alpha_{-i}),
// F(w) = (w - x_t)^{1-k} / (1-k).
template <class T>
T second_kind_b_period(const SchottkyGroup<T>& grp, const std::string& t, int k, int i, int L) {
  if (k < 2) throw input_error("second-kind pole order must be at least 2");
  const auto& xt = grp.x(t);
  if (xt.is_infinity()) throw domain_error("tail " + t + " sits at infinity");
  auto F = [&](const ProjectivePoint<T>& w) -> T {
    if (w.is_infinity()) return ring_traits<T>::zero_like(grp.like());
    T d = w.affine() - xt.affine();
    detail::guard_pole(d);
    T inv = ring_inverse(d);
    return detail::power(inv, k - 1) * ring_traits<T>::from_rational(frac(1, 1 - k), grp.like());
  };
  auto reps = coset_reps(grp.genus(), i, L);
  return deterministic_sum(
      reps.size(),
      [&](std::size_t n) -> T { return F(grp.image_of_alpha(reps[n], i)) - F(grp.image_of_alpha(reps[n], -i)); },
      ring_traits<T>::zero_like(grp.like()));
}

template <class T>
struct EtaBasis {
  std::string tail;
  Matrix<T> system;   // system[i][k] = b_i-period of omega_{t0, k+2}
  Matrix<T> coeffs;   // eta_j = sum_k coeffs[k][j] omega_{t0, k+2}
};

template <class T>
EtaBasis<T> eta_basis(const SchottkyGroup<T>& grp, const std::string& t0, int L) {
  if (grp.graph().tails.empty()) throw domain_error("eta basis needs at least one tail");
  const Tail& tail = grp.graph().tails.at(tail_index(grp.graph(), t0));
  if (tail.vertex != grp.base()) throw domain_error("tail " + t0 + " is not at the base vertex");
  const int g = grp.genus();
  EtaBasis<T> out{t0, Matrix<T>(g, std::vector<T>(g, grp.like())), {}};
  for (int i = 1; i <= g; ++i)
    for (int k = 0; k < g; ++k) out.system[i - 1][k] = second_kind_b_period(grp, t0, k + 2, i, L);
  out.coeffs = inverse_matrix(out.system);
  return out;
}

enum class EtaCycles { b_paths, a_cycles };

// Complex basis normalized on either cycle family. Second-kind forms have vanishing
// a-periods, so the a-cycle system is reported as singular.
inline EtaBasis<Complex> eta_basis(const SchottkyGroup<Complex>& grp, const std::string& t0, int L, EtaCycles cycles,
                                   const QuadratureOptions& q = {}) {
  if (cycles == EtaCycles::b_paths) return eta_basis(grp, t0, L);
  if (grp.graph().tails.empty()) throw domain_error("eta basis needs at least one tail");
  const Tail& tail = grp.graph().tails.at(tail_index(grp.graph(), t0));
  if (tail.vertex != grp.base()) throw domain_error("tail " + t0 + " is not at the base vertex");
  const int g = grp.genus();
  EtaBasis<Complex> out{t0, Matrix<Complex>(g, std::vector<Complex>(g)), {}};
  double scale = 0.0;
  for (int k = 0; k < g; ++k) {
    SecondKind<Complex> w(grp, t0, k + 2, L);
    for (int i = 1; i <= g; ++i) {
      out.system[i - 1][k] = a_cycle_integral_of(grp, i, std::cref(w), q);
      scale = std::max(scale, std::abs(out.system[i - 1][k]));
    }
  }
  if (scale < 1e-8) throw domain_error("a-cycle periods of second-kind differentials vanish; normalization is singular");
  out.coeffs = inverse_matrix(out.system);
  return out;
}

// Evaluator of eta_j as a combination of second-kind differentials.
inline ComplexFn eta_function(const SchottkyGroup<Complex>& grp, const EtaBasis<Complex>& eta, int j, int L) {
  std::vector<std::pair<Complex, std::shared_ptr<SecondKind<Complex>>>> parts;
  for (int k = 0; k < grp.genus(); ++k)
    parts.push_back({eta.coeffs[k][j - 1], std::make_shared<SecondKind<Complex>>(grp, eta.tail, k + 2, L)});
  return [parts](const Complex& z) {
    Complex s = 0;
    for (const auto& [c, w] : parts) s += c * (*w)(z);
    return s;
  };
}

// Matrix of the leading-term formula 1/((1-k)(alpha_i - x_t)^{k-1}), k = j + 1, over Q.
inline Matrix<Rational> displayed_constant_matrix(const std::vector<Rational>& alpha, const Rational& xt) {
  const std::size_t g = alpha.size();
  Matrix<Rational> m(g, std::vector<Rational>(g));
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      Rational p = 1;
      for (std::size_t e = 0; e <= j; ++e) p *= alpha[i] - xt;
      m[i][j] = 1 / (Rational(-static_cast<long>(j + 1)) * p);
    }
  return m;
}

// prod_i 1/(alpha_i - x) * prod_{i<j} (alpha_i - alpha_j)/((alpha_i - x)(alpha_j - x)).
inline Rational vandermonde_product(const std::vector<Rational>& alpha, const Rational& xt) {
  Rational p = 1;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    p /= alpha[i] - xt;
    for (std::size_t j = i + 1; j < alpha.size(); ++j) p *= (alpha[i] - alpha[j]) / ((alpha[i] - xt) * (alpha[j] - xt));
  }
  return p;
}

// ---- Gauss-Manin check ----

// Perturbation direction: keys "x:<branch>" or "y:<edge>", complex weights.
using ParamDirection = std::map<std::string, Complex>;

inline nlohmann::json complex_json(Complex v) { return nlohmann::json::array({v.real(), v.imag()}); }

inline RawParams perturb_params(const RawParams& raw, const ParamDirection& dir, double s) {
  RawParams out = raw;
  for (const auto& [key, d] : dir) {
    auto colon = key.find(':');
    std::string kind = key.substr(0, colon == std::string::npos ? 0 : colon);
    std::string label = colon == std::string::npos ? key : key.substr(colon + 1);
    auto& table = kind == "x" ? out.x : kind == "y" ? out.y : throw input_error("direction key must be x:<branch> or y:<edge>, got " + key);
    auto it = table.find(label);
    if (it == table.end()) throw input_error("direction names an unknown parameter: " + key);
    if (is_inf_value(it->second)) throw input_error("cannot perturb a point at infinity: " + key);
    it->second = complex_json(json_complex(it->second) + s * d);
  }
  return out;
}

// Default direction: scale every y_e by (1 + s).
inline ParamDirection default_direction(const RawParams& raw) {
  ParamDirection d;
  for (const auto& [e, v] : raw.y) d["y:" + e] = json_complex(v);
  return d;
}

struct GaussManinReport {
  double step = 0;
  double eta_residual = 0;    // central difference of the a- and b-periods of eta_j
  double omega_residual = 0;  // d(periods of omega_i) - sum_j (periods of eta_j) dlog P_ij
  double tolerance = 0;
  bool passed() const { return eta_residual < tolerance && omega_residual < tolerance; }
};

inline GaussManinReport gauss_manin_check(const StableGraph& graph, const RawParams& raw, const std::string& base,
                                          const std::string& t0, const ParamDirection& dir, double step, int L,
                                          double tolerance = 1e-5) {
  if (step <= 0) throw input_error("step must be positive");
  auto center = build_group(graph, make_params<Complex>(graph, raw), base, L);
  const int g = center.genus();
  const Complex z0 = default_base_point(center);
  const Complex two_pi_i(0, 2 * M_PI);
  auto unwrap = [&](Complex v) { return v - two_pi_i * std::round(v.imag() / (2 * M_PI)); };

  struct Sample {
    Matrix<Complex> logP, omega_a, omega_b, eta_a, eta_b;
  };
  auto sample = [&](const SchottkyGroup<Complex>& grp, bool omegas) {
    Sample out;
    const Matrix<Complex> zero(g, std::vector<Complex>(g));
    out.logP = out.omega_a = out.omega_b = out.eta_a = out.eta_b = zero;
    auto eta = eta_basis(grp, t0, L);
    for (int j = 1; j <= g; ++j) {
      auto f = eta_function(grp, eta, j, L);
      for (int k = 1; k <= g; ++k) {
        out.eta_a[j - 1][k - 1] = a_cycle_integral_of(grp, k, f);
        out.eta_b[j - 1][k - 1] = b_path_integral(grp, k, z0, f);
      }
    }
    if (!omegas) return out;
    auto P = period_matrix(grp, L).P;
    for (int i = 1; i <= g; ++i) {
      FirstKind<Complex> w(grp, i, L);
      for (int k = 1; k <= g; ++k) {
        out.logP[i - 1][k - 1] = std::log(P[i - 1][k - 1]);
        out.omega_a[i - 1][k - 1] = a_cycle_integral_of(grp, k, std::cref(w));
        out.omega_b[i - 1][k - 1] = b_path_integral(grp, k, z0, std::cref(w));
      }
    }
    return out;
  };
  auto at = [&](double s) { return build_group(graph, make_params<Complex>(graph, perturb_params(raw, dir, s)), base, L); };
  Sample mid = sample(center, false), plus = sample(at(step), true), minus = sample(at(-step), true);

  GaussManinReport r{step, 0, 0, tolerance};
  const double h2 = 2 * step;
  for (int j = 0; j < g; ++j)
    for (int k = 0; k < g; ++k) {
      r.eta_residual = std::max(r.eta_residual, std::abs(plus.eta_a[j][k] - minus.eta_a[j][k]) / h2);
      r.eta_residual = std::max(r.eta_residual, std::abs(plus.eta_b[j][k] - minus.eta_b[j][k]) / h2);
    }
  for (int i = 0; i < g; ++i)
    for (int k = 0; k < g; ++k) {
      Complex db = unwrap(plus.omega_b[i][k] - minus.omega_b[i][k]) / h2;
      Complex da = (plus.omega_a[i][k] - minus.omega_a[i][k]) / h2;
      Complex rb = 0, ra = 0;
      for (int j = 0; j < g; ++j) {
        Complex dlog = unwrap(plus.logP[i][j] - minus.logP[i][j]) / h2;
        rb += mid.eta_b[j][k] * dlog;
        ra += mid.eta_a[j][k] * dlog;
      }
      r.omega_residual = std::max({r.omega_residual, std::abs(db - rb), std::abs(da - ra)});
    }
  return r;
}

}  // namespace sforge
