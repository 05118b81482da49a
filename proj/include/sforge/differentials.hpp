#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sforge/parallel.hpp"
#include "sforge/schottky.hpp"

namespace sforge {

struct DifferentialSpec {
  enum class Kind { first, second, third };
  Kind kind = Kind::first;
  int i = 1;           // first kind
  std::string t, t2;   // second: t; third: t, t2
  int k = 2;           // second kind pole order

  std::string to_string() const {
    switch (kind) {
      case Kind::first:
        return "first:" + std::to_string(i);
      case Kind::second:
        return "second:" + t + "," + std::to_string(k);
      default:
        return "third:" + t + "," + t2;
    }
  }
};

// "first:i", "second:t,k", "third:t1,t2".
inline DifferentialSpec parse_differential_spec(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw input_error("differential spec must look like kind:args, got " + s);
  std::string kind = s.substr(0, colon), args = s.substr(colon + 1);
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t pos; (pos = args.find(',', start)) != std::string::npos; start = pos + 1)
    parts.push_back(args.substr(start, pos - start));
  parts.push_back(args.substr(start));
  DifferentialSpec d;
  try {
    if (kind == "first" && parts.size() == 1) {
      d.kind = DifferentialSpec::Kind::first;
      d.i = std::stoi(parts[0]);
    } else if (kind == "second" && parts.size() == 2) {
      d.kind = DifferentialSpec::Kind::second;
      d.t = parts[0];
      d.k = std::stoi(parts[1]);
    } else if (kind == "third" && parts.size() == 2) {
      d.kind = DifferentialSpec::Kind::third;
      d.t = parts[0];
      d.t2 = parts[1];
    } else {
      throw input_error("unknown differential kind: " + s);
    }
  } catch (const std::logic_error&) {
    throw input_error("bad differential spec: " + s);
  }
  return d;
}

// Distance below which a complex evaluation point counts as a pole.
inline constexpr double pole_guard = 1e-9;

namespace detail {

template <class T>
void guard_pole(const T& diff) {
  if constexpr (std::is_same_v<T, Complex>) {
    if (std::abs(diff) < pole_guard) throw domain_error("evaluation at pole");
  } else {
    if (!ring_traits<T>::is_unit(diff)) throw domain_error("evaluation at pole");
  }
}

// 1/(z - P) for a projective point, 0 at infinity.
template <class T>
T inv_diff(const T& z, const ProjectivePoint<T>& p) {
  if (p.is_infinity()) return ring_traits<T>::zero_like(z);
  T den = z * p.w - p.u;
  guard_pole(den);
  return p.w * ring_inverse(den);
}

template <class T>
struct ValueDerivative {
  T value, derivative;
};

template <class T>
ValueDerivative<T> value_derivative(const Moebius<T>& m, const T& z) {
  T den = m.c * z + m.d;
  guard_pole(den);
  T inv = ring_inverse(den);
  return {(m.a * z + m.b) * inv, m.det() * inv * inv};
}

template <class T>
T power(const T& x, int n) {
  T r = ring_traits<T>::one_like(x);
  for (int i = 0; i < n; ++i) r = r * x;
  return r;
}

}  // namespace detail

// sum over Gamma/<gamma_i> of 1/(z - gamma alpha_i) - 1/(z - gamma alpha_{-i}).
template <class T>
class FirstKind {
 public:
  FirstKind(const SchottkyGroup<T>& grp, int i, int L) : like_(grp.like()) {
    check_generator_index(grp.genus(), i);
    auto reps = coset_reps(grp.genus(), i, L);
    poles_ = parallel_map<std::pair<ProjectivePoint<T>, ProjectivePoint<T>>>(reps.size(), [&](std::size_t n) {
      return std::make_pair(grp.image_of_alpha(reps[n], i), grp.image_of_alpha(reps[n], -i));
    });
  }

  T operator()(const T& z) const {
    return deterministic_sum(
        poles_.size(),
        [&](std::size_t n) -> T { return detail::inv_diff(z, poles_[n].first) - detail::inv_diff(z, poles_[n].second); },
        ring_traits<T>::zero_like(like_));
  }

  const std::vector<std::pair<ProjectivePoint<T>, ProjectivePoint<T>>>& poles() const { return poles_; }

 private:
  T like_;
  std::vector<std::pair<ProjectivePoint<T>, ProjectivePoint<T>>> poles_;
};

// sum over Gamma of gamma'(z)/(gamma(z) - x_t)^k, optionally pulled back to another
// component through the tree path from it to the base.
template <class T>
class SecondKind {
 public:
  SecondKind(const SchottkyGroup<T>& grp, const std::string& t, int k, int L, const std::string& component = {})
      : like_(grp.like()), k_(k) {
    if (k < 2) throw input_error("second-kind pole order must be at least 2");
    const Tail& tail = grp.graph().tails.at(tail_index(grp.graph(), t));
    if (tail.vertex != grp.base()) throw domain_error("tail " + t + " is not at the base vertex");
    xt_ = grp.x(t);
    EdgePath tau = component.empty() ? EdgePath{} : grp.path_to_base(component);
    auto words = enumerate_reduced_words(grp.genus(), L);
    if constexpr (std::is_same_v<T, Complex>) {
      maps_ = grp.elements(words);
      if (!tau.empty()) {
        auto m = grp.map_of_path(tau);
        for (auto& g : maps_) g = g * m;
      }
    } else {
      maps_ = parallel_map<Moebius<T>>(words.size(), [&](std::size_t n) {
        EdgePath p = tau;
        EdgePath w = grp.path_of(words[n]);
        p.insert(p.end(), w.begin(), w.end());
        return grp.map_of_path(reduce_path(p));
      });
    }
  }

  T operator()(const T& z) const {
    return deterministic_sum(
        maps_.size(), [&](std::size_t n) -> T { return term(maps_[n], z); }, ring_traits<T>::zero_like(like_));
  }

 private:
  T term(const Moebius<T>& m, const T& z) const {
    auto vd = detail::value_derivative(m, z);
    if (xt_.is_infinity()) return detail::power(vd.value, k_ - 2) * vd.derivative;
    T diff = vd.value - xt_.affine();
    detail::guard_pole(diff);
    return vd.derivative * detail::power(ring_inverse(diff), k_);
  }

  T like_;
  int k_;
  ProjectivePoint<T> xt_;
  std::vector<Moebius<T>> maps_;
};

// sum over Gamma of gamma'(z) [1/(gamma z - p_1) - 1/(gamma z - p_2)], p_j = phi_{t_j}(x_{t_j}).
template <class T>
class ThirdKind {
 public:
  ThirdKind(const SchottkyGroup<T>& grp, const std::string& t1, const std::string& t2, int L) : like_(grp.like()) {
    if (t1 == t2) throw input_error("third-kind differential needs two distinct tails");
    auto words = enumerate_reduced_words(grp.genus(), L);
    EdgePath b1 = tail_path(grp.graph(), t1, grp.base()), b2 = tail_path(grp.graph(), t2, grp.base());
    if constexpr (std::is_same_v<T, Complex>) {
      p1_ = normalized(grp.map_of_path(b1).apply(grp.x(t1)));
      p2_ = normalized(grp.map_of_path(b2).apply(grp.x(t2)));
      maps_ = grp.elements(words);
    } else {
      terms_ = parallel_map<std::pair<Chain, Chain>>(words.size(), [&](std::size_t n) {
        EdgePath a = grp.path_of(words[n]);
        return std::make_pair(chain(grp, a, b1, grp.x(t1)), chain(grp, a, b2, grp.x(t2)));
      });
    }
  }

  T operator()(const T& z) const {
    if constexpr (std::is_same_v<T, Complex>) {
      return deterministic_sum(
          maps_.size(),
          [&](std::size_t n) {
            auto vd = detail::value_derivative(maps_[n], z);
            return vd.derivative * (detail::inv_diff(vd.value, p1_) - detail::inv_diff(vd.value, p2_));
          },
          Complex(0.0));
    } else {
      return deterministic_sum(
          terms_.size(), [&](std::size_t n) -> T { return eval_chain(terms_[n].first, z) - eval_chain(terms_[n].second, z); },
          ring_traits<T>::zero_like(like_));
    }
  }

 private:
  // d/dz log(gamma z - Phi(x)) after stripping the common final atoms phi_h of the two paths:
  // phi_h(U) - phi_h(V) = det (U - V) / ((c U + d)(c V + d)).
  struct Chain {
    std::vector<std::pair<Moebius<T>, Moebius<T>>> corrections;  // (map U, atom phi_h)
    Moebius<T> last;                                             // final U
    ProjectivePoint<T> v;                                        // final V
  };

  static Chain chain(const SchottkyGroup<T>& grp, EdgePath a, EdgePath b, const ProjectivePoint<T>& xt) {
    Chain c;
    while (!a.empty() && !b.empty() && a.back() == b.back()) {
      int h = a.back();
      a.pop_back();
      b.pop_back();
      c.corrections.push_back({grp.map_of_path(a), grp.atom(h)});
    }
    c.last = grp.map_of_path(a);
    c.v = grp.map_of_path(b).apply(xt);
    return c;
  }

  static T eval_chain(const Chain& c, const T& z) {
    auto u = detail::value_derivative(c.last, z);
    T r = u.derivative * detail::inv_diff(u.value, normalized(c.v));
    for (const auto& [m, atom] : c.corrections) {
      auto w = detail::value_derivative(m, z);
      T den = atom.c * w.value + atom.d;
      detail::guard_pole(den);
      r = r - atom.c * w.derivative * ring_inverse(den);
    }
    return r;
  }

  T like_;
  ProjectivePoint<T> p1_, p2_;
  std::vector<Moebius<T>> maps_;
  std::vector<std::pair<Chain, Chain>> terms_;
};

// Type-erased evaluator for any of the three kinds.
template <class T>
std::function<T(const T&)> make_differential(const SchottkyGroup<T>& grp, const DifferentialSpec& spec, int L,
                                             const std::string& component = {}) {
  switch (spec.kind) {
    case DifferentialSpec::Kind::first: {
      auto f = std::make_shared<FirstKind<T>>(grp, spec.i, L);
      return [f](const T& z) { return (*f)(z); };
    }
    case DifferentialSpec::Kind::second: {
      auto f = std::make_shared<SecondKind<T>>(grp, spec.t, spec.k, L, component);
      return [f](const T& z) { return (*f)(z); };
    }
    default: {
      auto f = std::make_shared<ThirdKind<T>>(grp, spec.t, spec.t2, L);
      return [f](const T& z) { return (*f)(z); };
    }
  }
}

template <class T>
T eval_first_kind(const SchottkyGroup<T>& grp, int i, const T& z, int L) {
  return FirstKind<T>(grp, i, L)(z);
}

template <class T>
T eval_second_kind(const SchottkyGroup<T>& grp, const std::string& t, int k, const T& z, int L) {
  return SecondKind<T>(grp, t, k, L)(z);
}

template <class T>
T eval_third_kind(const SchottkyGroup<T>& grp, const std::string& t1, const std::string& t2, const T& z, int L) {
  return ThirdKind<T>(grp, t1, t2, L)(z);
}

}  // namespace sforge
