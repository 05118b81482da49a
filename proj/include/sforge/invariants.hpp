#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sforge/parallel.hpp"
#include "sforge/params.hpp"
#include "sforge/schottky.hpp"

namespace sforge {

struct InvariantReport {
  int words = 0;
  int multiplier_checks = 0;
  int cross_ratio_checks = 0;
  bool conjugator_checked = false;
  bool conjugator_ok = true;
  std::vector<std::string> discrepancies;

  bool agree() const { return discrepancies.empty() && conjugator_ok; }
};

namespace detail {

template <class T>
bool ring_equal(const T& a, const T& b, double tol = 1e-9, bool relative = false) {
  if constexpr (std::is_same_v<T, Complex>)
    return std::abs(a - b) <= tol * std::max({relative ? 0.0 : 1.0, std::abs(a), std::abs(b)});
  else
    return a == b;
}

template <class T>
bool proportional(const Moebius<T>& m, const Moebius<T>& n, double tol = 1e-9) {
  const T ms[4] = {m.a, m.b, m.c, m.d}, ns[4] = {n.a, n.b, n.c, n.d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!ring_equal<T>(ms[i] * ns[j], ms[j] * ns[i], tol)) return false;
  return true;
}

}  // namespace detail

// Compares (A) multipliers of matched words and (B) cross-ratios of attractive fixed points
// [a(g1), a(g1^-1); a(g2), a(w)] for all nontrivial words of length <= L. Cross-ratios are
// compared as N1 D2 = N2 D1, which needs no division. Over C, multipliers match to relative tol.
template <class T>
InvariantReport conjugation_invariant_report(const SchottkyGroup<T>& g1, const SchottkyGroup<T>& g2, int L = 3,
                                             const std::optional<Moebius<T>>& conjugator = std::nullopt,
                                             double tol = 1e-9) {
  if (g1.genus() != g2.genus()) throw input_error("groups have different ranks");
  InvariantReport r;
  const int g = g1.genus();
  auto words = enumerate_reduced_words(g, L);
  words.erase(words.begin());
  struct Data {
    T multiplier;
    ProjectivePoint<T> attractive;
  };
  auto collect = [&](const SchottkyGroup<T>& grp) {
    return parallel_map<Data>(words.size(), [&](std::size_t n) {
      auto fp = grp.fixed_points_of(words[n]);
      return Data{fp.multiplier, fp.attractive};
    });
  };
  auto d1 = collect(g1), d2 = collect(g2);
  r.words = static_cast<int>(words.size());
  auto index_of = [&](const Word& w) {
    return static_cast<std::size_t>(std::find(words.begin(), words.end(), w) - words.begin());
  };
  for (std::size_t n = 0; n < words.size(); ++n) {
    ++r.multiplier_checks;
    if (!detail::ring_equal(d1[n].multiplier, d2[n].multiplier, tol, true))
      r.discrepancies.push_back("multiplier of " + word_to_string(words[n]));
  }
  if (g >= 2) {
    const std::size_t ref[3] = {index_of({1}), index_of({-1}), index_of({2})};
    auto parts = [&](const std::vector<Data>& d, std::size_t n) {
      const auto &a = d[ref[0]].attractive, &b = d[ref[1]].attractive, &c = d[ref[2]].attractive,
                 &w = d[n].attractive;
      return std::make_pair(T(det2(a, c) * det2(b, w)), T(det2(a, w) * det2(b, c)));
    };
    for (std::size_t n = 0; n < words.size(); ++n) {
      ++r.cross_ratio_checks;
      auto [n1, den1] = parts(d1, n);
      auto [n2, den2] = parts(d2, n);
      if (!detail::ring_equal<T>(n1 * den2, n2 * den1, tol))
        r.discrepancies.push_back("cross-ratio with " + word_to_string(words[n]));
    }
  }
  if (conjugator) {
    r.conjugator_checked = true;
    auto inv = conjugator->inverse();
    for (int i = 1; i <= g; ++i)
      if (!detail::proportional(*conjugator * g1.generator(i) * inv, g2.generator(i), tol)) {
        r.conjugator_ok = false;
        r.discrepancies.push_back("conjugator does not carry generator " + std::to_string(i));
      }
  }
  return r;
}

struct ConjugatedData {
  StableGraph graph;
  RawParams raw;
};

// Moves every branch point by a rational Moebius map; multipliers are unchanged.
inline ConjugatedData conjugate_params(const StableGraph& g, const RawParams& raw, const Moebius<Rational>& mu) {
  if (mu.det() == 0) throw input_error("conjugator is singular");
  ConjugatedData out{g, raw};
  out.graph.infinity.clear();
  for (const auto& [label, v] : raw.x) {
    auto p = is_inf_value(v) ? ProjectivePoint<Rational>::infinity() : ProjectivePoint<Rational>::finite(json_rational(v));
    auto q = normalized(mu.apply(p));
    if (q.is_infinity()) {
      out.raw.x[label] = "inf";
      out.graph.infinity.push_back(label);
    } else {
      out.raw.x[label] = to_string(q.affine());
    }
  }
  for (const auto& label : g.infinity)
    if (!raw.x.count(label)) {
      auto q = normalized(mu.apply(ProjectivePoint<Rational>::infinity()));
      if (q.is_infinity())
        out.graph.infinity.push_back(label);
      else
        out.raw.x[label] = to_string(q.affine());
    }
  return out;
}

// ---- comparison across a vertex split ----

struct SplitWordCheck {
  Word word;
  std::vector<int> crossings;  // per edge of the split graph
  bool leading_ok = true;      // multiplier = y^crossings * unit
  bool contracted_ok = true;   // dropping the new edge gives the crossings before the split
  bool beyond_cutoff = false;
};

struct SplitComparison {
  StableGraph split;
  std::string new_edge;
  std::vector<SplitWordCheck> words;
  bool agree() const {
    return std::all_of(words.begin(), words.end(), [](const auto& w) { return w.leading_ok && w.contracted_ok; });
  }
};

namespace detail {

inline std::vector<int> crossing_counts(const StableGraph& g, const EdgePath& p) {
  std::vector<int> c(g.edges.size(), 0);
  for (int h : cyclic_core(p)) ++c[code_index(h)];
  return c;
}

// s = y^n * unit: y^n divides every term and its own coefficient is nonzero.
inline bool leading_monomial_is(const TruncatedSeries& s, const std::vector<int>& n) {
  if (std::accumulate(n.begin(), n.end(), 0) > s.cutoff()) return s.is_zero();
  if (s.coefficient(n) == 0) return false;
  for (const auto& [mono, c] : s.terms())
    for (std::size_t i = 0; i < n.size(); ++i)
      if (monomial_exponent(mono, static_cast<int>(i)) < n[i]) return false;
  return true;
}

}  // namespace detail

// Splits v0 along (h1, h2) and checks, for every word of length <= L in the split graph's generators, that the multiplier over the formal
// ring of each graph is y^(crossings of the cyclic core) times a unit, where the word is carried to the
// original graph by contracting the new edge, and that the crossings correspond.
inline SplitComparison split_comparison(const StableGraph& g, const RawParams& raw, const std::string& base,
                                        const std::string& v0, const std::string& h1, const std::string& h2, int D,
                                        int L = 3) {
  auto sr = split_vertex(g, v0, h1, h2);
  SplitComparison out{sr.graph, sr.new_edge, {}};
  RawParams raw2 = raw;
  // points for the new edge: fresh rationals on both sides
  auto pts = make_params<TruncatedSeries>(g, raw, 0);
  std::vector<Rational> taken;
  auto fresh = [&](const std::string& v) {
    std::vector<Rational> used = taken;
    for (const auto& b : branches_at(sr.graph, v)) {
      auto it = pts.x.find(branch_label(sr.graph, b));
      if (it != pts.x.end() && !it->second.is_infinity()) used.push_back(it->second.affine().constant_term());
    }
    for (long k = 0;; ++k) {
      Rational c = frac(2 * k + 1, 7);
      if (std::find(used.begin(), used.end(), c) == used.end()) {
        taken.push_back(c);
        return c;
      }
    }
  };
  raw2.x[sr.new_edge] = to_string(fresh(v0));
  raw2.x["-" + sr.new_edge] = to_string(fresh(sr.new_vertex));
  raw2.y[sr.new_edge] = "1/100";
  GroupOptions opt;
  opt.reject_infinity_at_base = false;
  SchottkyGroup<TruncatedSeries> before(g, make_params<TruncatedSeries>(g, raw, D), base, L, opt);
  SchottkyGroup<TruncatedSeries> after(sr.graph, make_params<TruncatedSeries>(sr.graph, raw2, D), base, L, opt);
  if (before.genus() != after.genus()) throw domain_error("split changed the genus");
  // edge indices of the old graph inside the split graph
  std::vector<int> old_of(sr.graph.edges.size(), -1);
  for (std::size_t i = 0; i < sr.graph.edges.size(); ++i)
    if (sr.graph.edges[i].id != sr.new_edge) old_of[i] = edge_index(g, sr.graph.edges[i].id);
  auto words = enumerate_reduced_words(before.genus(), L);
  words.erase(words.begin());
  for (const auto& w : words) {
    EdgePath path = after.path_of(w), contracted_path;
    for (int h : path)
      if (old_of[code_index(h)] >= 0) contracted_path.push_back(edge_code(old_of[code_index(h)], code_sign(h)));
    contracted_path = reduce_path(contracted_path);
    SplitWordCheck c{w, detail::crossing_counts(sr.graph, path), true, true, false};
    auto n_before = detail::crossing_counts(g, contracted_path);
    c.beyond_cutoff = std::accumulate(c.crossings.begin(), c.crossings.end(), 0) > D;
    c.leading_ok = detail::leading_monomial_is(after.fixed_points_of(w).multiplier, c.crossings) &&
                   detail::leading_monomial_is(before.fixed_points_of_path(contracted_path).multiplier, n_before);
    std::vector<int> contracted(g.edges.size(), 0);
    for (std::size_t i = 0; i < c.crossings.size(); ++i)
      if (old_of[i] >= 0) contracted[old_of[i]] += c.crossings[i];
    c.contracted_ok = contracted == n_before;
    out.words.push_back(std::move(c));
  }
  return out;
}

}  // namespace sforge
