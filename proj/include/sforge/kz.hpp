#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sforge/graph.hpp"
#include "sforge/moebius.hpp"
#include "sforge/ncseries.hpp"

namespace sforge {

using RSeries = NCSeries<Rational>;

struct LoopSubstitution {
  RSeries X_l;        // (T/(e^T - 1)) . A
  RSeries X_minus_l;  // (T/(e^{-T} - 1)) . A
  RSeries X_e;        // -[T, A]
};

inline LoopSubstitution loop_substitution(const AlphabetPtr& alphabet, const std::string& T, const std::string& A,
                                          int W) {
  if (W < 1) throw input_error("weight cutoff must be at least 1");
  auto b = bernoulli_expansion(W);
  std::vector<std::vector<Rational>> plus(W), minus(W);
  for (int k = 0; k < W; ++k) {
    plus[k] = {b[k]};
    minus[k] = {k % 2 ? b[k] : Rational(-b[k])};
  }
  auto t = RSeries::letter(alphabet, W, T), a = RSeries::letter(alphabet, W, A);
  return {nc_ad_series(plus, alphabet, T, A, W), nc_ad_series(minus, alphabet, T, A, W), -bracket(t, a)};
}

inline LoopSubstitution loop_substitution(int i, int W) {
  std::string k = std::to_string(i);
  return loop_substitution(make_alphabet({"T" + k, "A" + k}), "T" + k, "A" + k, W);
}

// Residues X_h for every oriented edge and tail of a graph.
struct ResidueAssignment {
  StableGraph graph;
  AlphabetPtr alphabet;
  int W = 0;
  std::string eliminated;
  std::map<std::string, RSeries> X;
  std::set<std::string> elliptic;  // edges that are loops of the base graph

  const RSeries& at(const std::string& label) const {
    auto it = X.find(label);
    if (it == X.end()) throw input_error("no residue for branch " + label);
    return it->second;
  }

  std::map<std::string, RSeries> vertex_sums() const {
    std::map<std::string, RSeries> out;
    for (const auto& v : graph.vertices) {
      RSeries s(alphabet, W);
      for (const auto& b : branches_at(graph, v)) s += at(branch_label(graph, b));
      out.emplace(v, std::move(s));
    }
    return out;
  }

  // Base loops carry X_l + X_{-l} = -[T, A] and are skipped.
  bool antisymmetric() const {
    return std::all_of(graph.edges.begin(), graph.edges.end(), [&](const Edge& e) {
      return elliptic.count(e.id) || (at(e.id) + at("-" + e.id)).is_zero();
    });
  }

  bool balanced() const {
    auto sums = vertex_sums();
    return antisymmetric() && std::all_of(sums.begin(), sums.end(), [](const auto& kv) { return kv.second.is_zero(); });
  }
};

// Center, loops and connecting edges of a lollipop-shaped graph.
struct LollipopShape {
  std::string center;
  std::vector<std::string> loops;  // l_i
  std::vector<std::string> stems;  // e_i, from v_i to the center
};

// The center may carry only two branches (genus 1, one tail).
inline LollipopShape lollipop_shape(const StableGraph& g) {
  auto bad = validate_stable(g, false);
  if (!bad.empty()) throw input_error("invalid graph: " + bad.front());
  if (g.tails.empty()) throw domain_error("tail required to realize the defining relation");
  LollipopShape s;
  s.center = g.tails.front().vertex;
  for (const auto& t : g.tails)
    if (t.vertex != s.center) throw domain_error("graph is not lollipop-shaped: tails on several vertices");
  for (const auto& v : g.vertices) {
    if (v == s.center) continue;
    std::string loop, stem;
    for (const auto& e : g.edges) {
      if (e.loop && e.from == v) {
        if (!loop.empty()) throw domain_error("graph is not lollipop-shaped: two loops at " + v);
        loop = e.id;
      } else if (!e.loop && (e.from == v || e.to == v)) {
        if (!stem.empty() || e.from != v || e.to != s.center)
          throw domain_error("graph is not lollipop-shaped: vertex " + v + " must have one edge into " + s.center);
        stem = e.id;
      }
    }
    if (loop.empty() || stem.empty()) throw domain_error("graph is not lollipop-shaped at " + v);
    s.loops.push_back(loop);
    s.stems.push_back(stem);
  }
  for (const auto& e : g.edges)
    if (e.loop && e.from == s.center) throw domain_error("graph is not lollipop-shaped: loop at the center");
  if (s.loops.size() + g.tails.size() < 3 && !(s.loops.size() == 1 && g.tails.size() == 1))
    throw domain_error("graph is not lollipop-shaped: unstable center");
  return s;
}

inline std::string default_eliminated_tail(const StableGraph& g) {
  if (g.tails.empty()) throw domain_error("tail required to realize the defining relation");
  return std::max_element(g.tails.begin(), g.tails.end(), [](const Tail& a, const Tail& b) { return a.nu < b.nu; })
      ->id;
}

// Letters X_t (t != t*), then T_i, A_i per loop.
inline AlphabetPtr kz_alphabet(const StableGraph& g, const LollipopShape& s, const std::string& eliminated) {
  std::vector<std::string> letters;
  for (const auto& t : g.tails)
    if (t.id != eliminated) letters.push_back("X_" + t.id);
  for (std::size_t i = 1; i <= s.loops.size(); ++i) {
    letters.push_back("T" + std::to_string(i));
    letters.push_back("A" + std::to_string(i));
  }
  return make_alphabet(std::move(letters));
}

inline ResidueAssignment base_assignment(const StableGraph& g, int W, std::string eliminated = {}) {
  if (W < 1) throw input_error("weight cutoff must be at least 1");
  auto shape = lollipop_shape(g);
  if (eliminated.empty()) eliminated = default_eliminated_tail(g);
  tail_index(g, eliminated);
  ResidueAssignment a{g, kz_alphabet(g, shape, eliminated), W, eliminated, {},
                      std::set<std::string>(shape.loops.begin(), shape.loops.end())};
  RSeries relation(a.alphabet, W);  // sum_i [T_i, A_i]
  for (std::size_t i = 0; i < shape.loops.size(); ++i) {
    std::string k = std::to_string(i + 1);
    auto sub = loop_substitution(a.alphabet, "T" + k, "A" + k, W);
    a.X[shape.loops[i]] = sub.X_l;
    a.X["-" + shape.loops[i]] = sub.X_minus_l;
    a.X[shape.stems[i]] = sub.X_e;
    a.X["-" + shape.stems[i]] = -sub.X_e;
    relation -= sub.X_e;
  }
  RSeries last = relation;
  for (const auto& t : g.tails) {
    if (t.id == eliminated) continue;
    a.X[t.id] = RSeries::letter(a.alphabet, W, "X_" + t.id);
    last -= a.X[t.id];
  }
  a.X[eliminated] = last;
  return a;
}

// Ids and orientations must agree; vertex names may differ.
inline bool same_labeled_graph(const StableGraph& a, const StableGraph& b) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size() || a.tails.size() != b.tails.size())
    return false;
  std::map<std::string, std::string> rename;
  auto match = [&](const std::string& u, const std::string& v) {
    auto [it, fresh] = rename.emplace(u, v);
    return it->second == v;
  };
  auto sa = sorted_graph(a), sb = sorted_graph(b);
  for (std::size_t i = 0; i < sa.edges.size(); ++i) {
    const auto &e = sa.edges[i], &f = sb.edges[i];
    if (e.id != f.id || !match(e.from, f.from) || !match(e.to, f.to)) return false;
  }
  for (std::size_t i = 0; i < sa.tails.size(); ++i)
    if (sa.tails[i].id != sb.tails[i].id || !match(sa.tails[i].vertex, sb.tails[i].vertex)) return false;
  std::set<std::string> images;
  for (const auto& [u, v] : rename) images.insert(v);
  return images.size() == rename.size();
}

enum class ExpansionCase { distinct_branches, loop_branches };

// The branches h1, h2 kept at v_{h0}, and which of the two cases applies.
inline std::pair<std::vector<std::string>, ExpansionCase> expansion_data(const StableGraph& fine, const std::string& h0) {
  int idx = edge_index(fine, h0);
  const Edge& e = fine.edges[idx];
  if (e.loop) throw input_error("cannot contract loop " + h0);
  std::vector<std::string> kept;
  for (const auto& b : branches_at(fine, e.to)) {
    if (b.kind == Branch::Kind::edge && b.index == idx) continue;
    kept.push_back(branch_label(fine, b));
  }
  bool loop = kept.size() == 2 && (kept[0] == "-" + kept[1] || kept[1] == "-" + kept[0]);
  return {kept, loop ? ExpansionCase::loop_branches : ExpansionCase::distinct_branches};
}

// Assignment on the graph obtained by contracting h0; residues of surviving branches are kept.
inline ResidueAssignment apply_expansion_rule(const ResidueAssignment& fine, const std::string& h0,
                                              const StableGraph* target = nullptr) {
  expansion_data(fine.graph, h0);
  if (fine.elliptic.count(h0))
    throw domain_error("edge " + h0 + " is a loop of the base graph; contracting it breaks the vertex sums");
  ResidueAssignment coarse{contract_edge(fine.graph, h0), fine.alphabet, fine.W, fine.eliminated, fine.X, fine.elliptic};
  coarse.X.erase(h0);
  coarse.X.erase("-" + h0);
  if (target && !same_labeled_graph(coarse.graph, *target))
    throw input_error("contraction of " + h0 + " does not produce the given graph");
  return coarse;
}

// Inverse move: split v0 keeping h1, h2; the new edge gets X = -(X_h1 + X_h2).
inline ResidueAssignment expand_assignment(const ResidueAssignment& coarse, const std::string& v0, const std::string& h1,
                                           const std::string& h2, const std::string& new_vertex = {},
                                           const std::string& new_edge = {}) {
  auto split = split_vertex(coarse.graph, v0, h1, h2, new_vertex, new_edge);
  ResidueAssignment fine{split.graph, coarse.alphabet, coarse.W, coarse.eliminated, coarse.X, coarse.elliptic};
  RSeries x0 = -(coarse.at(h1) + coarse.at(h2));
  fine.X["-" + split.new_edge] = -x0;
  fine.X[split.new_edge] = std::move(x0);
  return fine;
}

struct KZPole {
  std::string label;
  ProjectivePoint<Rational> x;
  RSeries residue;
};

// d - sum_h X_h dz/(z - x_h) on one component; a pole at infinity enters only through its residue.
struct KZForm {
  std::string vertex;
  std::vector<KZPole> poles;

  RSeries residue_sum() const {
    RSeries s = poles.front().residue;
    for (std::size_t i = 1; i < poles.size(); ++i) s += poles[i].residue;
    return s;
  }
  const KZPole& pole(const std::string& label) const {
    for (const auto& p : poles)
      if (p.label == label) return p;
    throw input_error("no pole " + label + " on component " + vertex);
  }
};

inline KZForm kz_form_on_component(const ResidueAssignment& a, const std::string& v,
                                   const std::map<std::string, ProjectivePoint<Rational>>& x) {
  require_vertex(a.graph, v);
  KZForm f{v, {}};
  for (const auto& b : branches_at(a.graph, v)) {
    std::string label = branch_label(a.graph, b);
    auto it = x.find(label);
    if (it == x.end()) throw input_error("missing branch point x for " + label);
    for (const auto& p : f.poles)
      if (same_point(p.x, it->second)) throw domain_error("coincident poles " + p.label + " and " + label + " on " + v);
    f.poles.push_back({label, normalized(it->second), a.at(label)});
  }
  if (f.poles.size() < 2) throw domain_error("component " + v + " has fewer than two poles");
  if (!f.residue_sum().is_zero()) throw domain_error("residues on " + v + " do not sum to zero");
  return f;
}

}  // namespace sforge
