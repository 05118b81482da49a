#pragma once

#include <map>
#include <string>
#include <vector>

#include "sforge/differentials.hpp"
#include "sforge/params.hpp"

namespace sforge {

// A rational 1-form f(z) dz on a component P_v:
// f = sum_a sum_j principal[a][j] / (z - a)^(j+1) + sum_j polynomial[j] z^j.
struct RestrictedForm {
  std::string vertex;
  std::map<Rational, std::vector<Rational>> principal;
  std::vector<Rational> polynomial;

  void normalize() {
    for (auto it = principal.begin(); it != principal.end();) {
      auto& c = it->second;
      while (!c.empty() && c.back() == 0) c.pop_back();
      it = c.empty() ? principal.erase(it) : std::next(it);
    }
    while (!polynomial.empty() && polynomial.back() == 0) polynomial.pop_back();
  }

  void add(const Rational& a, int order, const Rational& coeff) {
    auto& c = principal[a];
    if (static_cast<int>(c.size()) < order) c.resize(order);
    c[order - 1] += coeff;
  }

  void add_polynomial(int degree, const Rational& coeff) {
    if (static_cast<int>(polynomial.size()) <= degree) polynomial.resize(degree + 1);
    polynomial[degree] += coeff;
  }

  bool is_zero() const {
    RestrictedForm c = *this;
    c.normalize();
    return c.principal.empty() && c.polynomial.empty();
  }

  // Residue at a finite point or at infinity.
  Rational residue(const ProjectivePoint<Rational>& p) const {
    if (p.is_infinity()) {
      Rational s = 0;
      for (const auto& [a, c] : principal)
        if (!c.empty()) s -= c[0];
      return s;
    }
    auto it = principal.find(p.affine());
    return it == principal.end() || it->second.empty() ? Rational(0) : it->second[0];
  }

  Rational operator()(const Rational& z) const {
    Rational s = 0, zp = 1;
    for (const auto& c : polynomial) {
      s += c * zp;
      zp *= z;
    }
    for (const auto& [a, c] : principal) {
      if (z == a) throw domain_error("evaluation at pole");
      Rational inv = 1 / Rational(z - a), p = inv;
      for (const auto& cj : c) {
        s += cj * p;
        p *= inv;
      }
    }
    return s;
  }

  bool operator==(const RestrictedForm& o) const {
    RestrictedForm a = *this, b = o;
    a.normalize();
    b.normalize();
    return a.principal == b.principal && a.polynomial == b.polynomial;
  }

  std::string to_string() const {
    RestrictedForm c = *this;
    c.normalize();
    std::string s;
    auto term = [&](const Rational& k, const std::string& body) {
      if (!s.empty()) s += " + ";
      s += "(" + sforge::to_string(k) + ")" + body;
    };
    for (const auto& [a, cs] : c.principal)
      for (std::size_t j = 0; j < cs.size(); ++j)
        if (cs[j] != 0)
          term(cs[j], "/(z - " + sforge::to_string(a) + ")" + (j ? "^" + std::to_string(j + 1) : std::string()));
    for (std::size_t j = 0; j < c.polynomial.size(); ++j)
      if (c.polynomial[j] != 0) term(c.polynomial[j], j ? "z^" + std::to_string(j) : std::string());
    return (s.empty() ? "0" : s) + " dz";
  }
};

// Exact branch points read from a parameter file.
inline std::map<std::string, ProjectivePoint<Rational>> rational_points(const StableGraph& g, const RawParams& raw) {
  auto p = make_params<TruncatedSeries>(g, raw, 0);
  std::map<std::string, ProjectivePoint<Rational>> out;
  for (const auto& [label, pt] : p.x) out[label] = normalized(ProjectivePoint<Rational>{pt.u.constant_term(), pt.w.constant_term()});
  return out;
}

namespace detail {

inline void add_simple(RestrictedForm& f, const ProjectivePoint<Rational>& x, const Rational& c) {
  if (!x.is_infinity()) f.add(x.affine(), 1, c);
}

// +1 at x_h on v_h and -1 at x_{-h} on v_{-h} for every oriented edge of the path.
inline void add_edge_path(RestrictedForm& f, const StableGraph& g, const std::map<std::string, ProjectivePoint<Rational>>& x,
                          const EdgePath& path, int sign) {
  for (int h : path) {
    if (code_target(g, h) == f.vertex) add_simple(f, x.at(code_label(g, h)), Rational(sign));
    if (code_target(g, -h) == f.vertex) add_simple(f, x.at(code_label(g, -h)), Rational(-sign));
  }
}

inline bool solve_check(std::vector<std::vector<Rational>> a, std::vector<Rational>& b) {
  std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational k = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= k * a[c][j];
      b[r] -= k * b[c];
    }
  }
  for (std::size_t c = 0; c < n; ++c) b[c] /= a[c][c];
  return true;
}

}  // namespace detail

// Closed form of the y = 0 restriction, read off from the combinatorics of the graph.
inline RestrictedForm closed_form_restriction(const StableGraph& g, const RawParams& raw, const std::string& base,
                                              const DifferentialSpec& spec, const std::string& v) {
  require_vertex(g, v);
  auto x = rational_points(g, raw);
  RestrictedForm f;
  f.vertex = v;
  switch (spec.kind) {
    case DifferentialSpec::Kind::first: {
      auto gens = fundamental_group_generators(g, base);
      if (spec.i < 1 || spec.i > static_cast<int>(gens.paths.size()))
        throw input_error("generator index out of range: " + std::to_string(spec.i));
      detail::add_edge_path(f, g, x, cyclic_core(gens.paths[spec.i - 1]), 1);
      break;
    }
    case DifferentialSpec::Kind::second: {
      const Tail& t = g.tails.at(tail_index(g, spec.t));
      if (t.vertex != v) break;
      const auto& xt = x.at(spec.t);
      if (xt.is_infinity())
        f.add_polynomial(spec.k - 2, 1);
      else
        f.add(xt.affine(), spec.k, 1);
      break;
    }
    case DifferentialSpec::Kind::third: {
      for (int s : {1, -1}) {
        const std::string& id = s > 0 ? spec.t : spec.t2;
        if (g.tails.at(tail_index(g, id)).vertex == v) detail::add_simple(f, x.at(id), Rational(s));
        detail::add_edge_path(f, g, x, tail_path(g, id, base), s);
      }
      break;
    }
  }
  f.normalize();
  return f;
}

struct RestrictionOptions {
  int L = 4;
  bool check_stability = true;  // refit at L + 2 and require equality
};

namespace detail {

inline RestrictedForm fit_restriction(const std::function<Rational(const Rational&)>& f, const std::string& v,
                                      const std::vector<Rational>& points, int order, int poly_degree) {
  struct Unknown {
    bool pole;
    Rational a;
    int j;
  };
  std::vector<Unknown> unknowns;
  for (const auto& a : points)
    for (int j = 1; j <= order; ++j) unknowns.push_back({true, a, j});
  for (int d = 0; d <= poly_degree; ++d) unknowns.push_back({false, 0, d});
  auto basis = [&](const Unknown& u, const Rational& z) {
    Rational r = 1;
    if (u.pole) {
      Rational inv = 1 / Rational(z - u.a);
      for (int j = 0; j < u.j; ++j) r *= inv;
    } else {
      for (int j = 0; j < u.j; ++j) r *= z;
    }
    return r;
  };
  const std::size_t n = unknowns.size(), extra = 3;
  std::vector<Rational> samples;
  for (long s = 0; samples.size() < n + extra; ++s) {
    Rational z = frac(7 * s + 2, 5 + (s % 3)) + frac(1, s + 11);
    if (std::find(points.begin(), points.end(), z) == points.end()) samples.push_back(z);
  }
  std::vector<Rational> values(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) values[s] = f(samples[s]);
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  std::vector<Rational> b(values.begin(), values.begin() + static_cast<long>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a[r][c] = basis(unknowns[c], samples[r]);
  if (!detail::solve_check(a, b)) throw domain_error("restriction fit is singular");
  RestrictedForm out;
  out.vertex = v;
  for (std::size_t c = 0; c < n; ++c) {
    if (b[c] == 0) continue;
    if (unknowns[c].pole)
      out.add(unknowns[c].a, unknowns[c].j, b[c]);
    else
      out.add_polynomial(unknowns[c].j, b[c]);
  }
  out.normalize();
  for (std::size_t s = n; s < samples.size(); ++s)
    if (out(samples[s]) != values[s])
      throw domain_error("restriction on " + v + " is not a rational form with poles at the branch points");
  return out;
}

}  // namespace detail

// Exact restriction of a differential to P_v at y = 0, computed from the Poincare series
// over the formal ring at cutoff 0 and fitted to a partial-fraction form.
inline RestrictedForm restrict_to_component(const StableGraph& g, const RawParams& raw, const std::string& base,
                                            const DifferentialSpec& spec, const std::string& v,
                                            const RestrictionOptions& opt = {}) {
  require_vertex(g, v);
  auto params = make_params<TruncatedSeries>(g, raw, 0);
  GroupOptions gopt;
  gopt.reject_infinity_at_base = false;
  gopt.check_schottky = false;
  const bool pulled = spec.kind == DifferentialSpec::Kind::second;
  const std::string group_base = pulled ? base : v;

  std::vector<Rational> points;
  for (const auto& b : branches_at(g, v)) {
    const auto& p = params.x.at(branch_label(g, b));
    if (p.is_infinity()) continue;
    Rational a = p.affine().constant_term();
    if (std::find(points.begin(), points.end(), a) == points.end()) points.push_back(a);
  }
  std::sort(points.begin(), points.end());
  const int order = spec.kind == DifferentialSpec::Kind::second ? spec.k : 1;
  const int poly = std::max(0, order - 2);

  auto fit_at = [&](int L) {
    SchottkyGroup<TruncatedSeries> grp(g, params, group_base, L, gopt);
    auto f = make_differential(grp, spec, L, pulled ? v : std::string());
    const auto like = grp.like();
    auto eval = [&](const Rational& z) { return f(ring_traits<TruncatedSeries>::from_rational(z, like)).constant_term(); };
    return detail::fit_restriction(eval, v, points, order, poly);
  };
  RestrictedForm r = fit_at(opt.L);
  if (opt.check_stability && !(fit_at(opt.L + 2) == r))
    throw domain_error("restriction on " + v + " changed between word lengths " + std::to_string(opt.L) + " and " +
                       std::to_string(opt.L + 2));
  return r;
}

// Residue of the restricted form at the branch point x_h (on P_{v_h}).
inline Rational residue_at_branch(const RestrictedForm& f, const std::map<std::string, ProjectivePoint<Rational>>& x,
                                  const std::string& label) {
  return f.residue(x.at(label));
}

struct NodeBalance {
  std::string edge;
  Rational at_plus, at_minus;
  bool balanced() const { return at_plus + at_minus == 0; }
};

// Residues at x_e on P_{v_e} and at x_{-e} on P_{v_{-e}} for every edge.
inline std::vector<NodeBalance> node_balance(const StableGraph& g, const RawParams& raw,
                                             const std::map<std::string, RestrictedForm>& forms) {
  auto x = rational_points(g, raw);
  std::vector<NodeBalance> out;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    NodeBalance nb{e.id, forms.at(e.to).residue(x.at(e.id)), forms.at(e.from).residue(x.at("-" + e.id))};
    out.push_back(nb);
  }
  return out;
}

}  // namespace sforge
