#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sforge/error.hpp"

namespace sforge {

// Edge e oriented from v_{-e} = from to v_e = to.
struct Edge {
  std::string id;
  std::string from;
  std::string to;
  bool loop = false;
};

struct Tail {
  std::string id;
  std::string vertex;
  int nu = 0;
};

struct StableGraph {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  std::vector<Tail> tails;
  std::vector<std::string> infinity;  // branch labels "e", "-e" or "t"
};

// A branch: an oriented edge or a tail.
struct Branch {
  enum class Kind { edge, tail };
  Kind kind = Kind::edge;
  int index = 0;
  int sign = 1;

  bool operator==(const Branch&) const = default;
  bool operator<(const Branch& o) const {
    return std::tie(kind, index, sign) < std::tie(o.kind, o.index, o.sign);
  }
  Branch reversed() const { return {kind, index, -sign}; }
};

// Oriented edges along a path, encoded as +(i+1) or -(i+1) for edge index i.
using EdgePath = std::vector<int>;

inline int edge_code(int index, int sign) { return sign * (index + 1); }
inline int code_index(int code) { return (code > 0 ? code : -code) - 1; }
inline int code_sign(int code) { return code > 0 ? 1 : -1; }
inline Branch code_branch(int code) { return {Branch::Kind::edge, code_index(code), code_sign(code)}; }

inline int edge_index(const StableGraph& g, const std::string& id) {
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].id == id) return static_cast<int>(i);
  throw input_error("unknown edge: " + id);
}

inline int tail_index(const StableGraph& g, const std::string& id) {
  for (std::size_t i = 0; i < g.tails.size(); ++i)
    if (g.tails[i].id == id) return static_cast<int>(i);
  throw input_error("unknown tail: " + id);
}

inline bool has_vertex(const StableGraph& g, const std::string& v) {
  return std::find(g.vertices.begin(), g.vertices.end(), v) != g.vertices.end();
}

inline void require_vertex(const StableGraph& g, const std::string& v) {
  if (!has_vertex(g, v)) throw input_error("unknown vertex: " + v);
}

inline Branch parse_branch(const StableGraph& g, const std::string& label) {
  if (!label.empty() && label[0] == '-') return {Branch::Kind::edge, edge_index(g, label.substr(1)), -1};
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].id == label) return {Branch::Kind::edge, static_cast<int>(i), 1};
  for (std::size_t i = 0; i < g.tails.size(); ++i)
    if (g.tails[i].id == label) return {Branch::Kind::tail, static_cast<int>(i), 1};
  throw input_error("unknown branch: " + label);
}

inline std::string branch_label(const StableGraph& g, const Branch& b) {
  if (b.kind == Branch::Kind::tail) return (b.sign < 0 ? "-" : "") + g.tails.at(b.index).id;
  return (b.sign < 0 ? "-" : "") + g.edges.at(b.index).id;
}

inline std::string code_label(const StableGraph& g, int code) { return branch_label(g, code_branch(code)); }

inline const std::string& terminal_vertex(const StableGraph& g, const Branch& b) {
  if (b.kind == Branch::Kind::tail) return g.tails.at(b.index).vertex;
  const Edge& e = g.edges.at(b.index);
  return b.sign > 0 ? e.to : e.from;
}

inline const std::string& code_target(const StableGraph& g, int code) {
  return terminal_vertex(g, code_branch(code));
}
inline const std::string& code_source(const StableGraph& g, int code) {
  return terminal_vertex(g, code_branch(-code));
}

// Branches ending at v: edges by index (+ before -), then tails.
inline std::vector<Branch> branches_at(const StableGraph& g, const std::string& v) {
  std::vector<Branch> out;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (g.edges[i].to == v) out.push_back({Branch::Kind::edge, static_cast<int>(i), 1});
    if (g.edges[i].from == v) out.push_back({Branch::Kind::edge, static_cast<int>(i), -1});
  }
  for (std::size_t i = 0; i < g.tails.size(); ++i)
    if (g.tails[i].vertex == v) out.push_back({Branch::Kind::tail, static_cast<int>(i), 1});
  return out;
}

inline EdgePath inverse_path(const EdgePath& p) {
  EdgePath r(p.rbegin(), p.rend());
  for (int& c : r) c = -c;
  return r;
}

inline EdgePath reduce_path(const EdgePath& p) {
  EdgePath r;
  for (int c : p) {
    if (!r.empty() && r.back() == -c)
      r.pop_back();
    else
      r.push_back(c);
  }
  return r;
}

inline bool is_reduced(const EdgePath& p) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (p[i] == -p[i + 1]) return false;
  return true;
}

// Cyclically reduced core of a reduced closed path: p = q core q^{-1}.
inline EdgePath cyclic_core(EdgePath p) {
  p = reduce_path(p);
  std::size_t lo = 0, hi = p.size();
  while (hi - lo >= 2 && p[lo] == -p[hi - 1]) {
    ++lo;
    --hi;
  }
  return EdgePath(p.begin() + static_cast<long>(lo), p.begin() + static_cast<long>(hi));
}

inline std::string path_to_string(const StableGraph& g, const EdgePath& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + code_label(g, p[i]);
  return s;
}

// Violations of the stable-graph rules; empty when valid.
inline std::vector<std::string> validate_stable(const StableGraph& g, bool check_stability = true) {
  std::vector<std::string> bad;
  if (g.vertices.empty()) bad.push_back("graph has no vertices");
  std::set<std::string> vs, ids;
  for (const auto& v : g.vertices)
    if (!vs.insert(v).second) bad.push_back("duplicate vertex id: " + v);
  for (const auto& e : g.edges) {
    if (e.id.empty() || e.id[0] == '-') bad.push_back("invalid edge id: '" + e.id + "'");
    if (!ids.insert(e.id).second) bad.push_back("duplicate branch id: " + e.id);
    if (!vs.count(e.from) || !vs.count(e.to)) bad.push_back("edge " + e.id + " has unknown endpoint");
    if (e.loop != (e.from == e.to)) bad.push_back("edge " + e.id + " loop flag inconsistent with endpoints");
  }
  for (const auto& t : g.tails) {
    if (t.id.empty() || t.id[0] == '-') bad.push_back("invalid tail id: '" + t.id + "'");
    if (!ids.insert(t.id).second) bad.push_back("duplicate branch id: " + t.id);
    if (!vs.count(t.vertex)) bad.push_back("tail " + t.id + " has unknown vertex");
  }
  if (!bad.empty()) return bad;

  // connectivity
  std::map<std::string, std::string> parent;
  for (const auto& v : g.vertices) parent[v] = v;
  auto find = [&](std::string x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) parent[find(e.from)] = find(e.to);
  std::set<std::string> roots;
  for (const auto& v : g.vertices) roots.insert(find(v));
  if (roots.size() > 1) bad.push_back("graph is not connected");

  for (const auto& v : g.vertices) {
    auto n = branches_at(g, v).size();
    if (check_stability && n < 3) bad.push_back("vertex " + v + " has " + std::to_string(n) + " branches (needs at least 3)");
  }

  std::vector<int> nus;
  for (const auto& t : g.tails) nus.push_back(t.nu);
  std::sort(nus.begin(), nus.end());
  for (std::size_t i = 0; i < nus.size(); ++i)
    if (nus[i] != static_cast<int>(i) + 1) {
      bad.push_back("tail numbering is not a bijection onto 1..n");
      break;
    }

  std::set<std::string> seen_inf;
  std::map<std::string, std::string> inf_at_vertex;
  for (const auto& label : g.infinity) {
    Branch b;
    try {
      b = parse_branch(g, label);
    } catch (const input_error&) {
      bad.push_back("infinity set names unknown branch: " + label);
      continue;
    }
    std::string opposite = branch_label(g, b.reversed());
    if (b.kind == Branch::Kind::edge && seen_inf.count(opposite))
      bad.push_back("infinity set contains both orientations of edge " + g.edges[b.index].id);
    seen_inf.insert(label);
    const std::string& v = terminal_vertex(g, b);
    auto [it, fresh] = inf_at_vertex.try_emplace(v, label);
    if (!fresh) bad.push_back("infinity branches " + it->second + " and " + label + " share vertex " + v);
  }
  return bad;
}

inline void require_valid(const StableGraph& g) {
  auto bad = validate_stable(g);
  if (!bad.empty()) throw input_error("invalid stable graph: " + bad.front());
}

// (genus, number of tails).
inline std::pair<int, int> type_of(const StableGraph& g) {
  require_valid(g);
  int genus = static_cast<int>(g.edges.size()) - static_cast<int>(g.vertices.size()) + 1;
  return {genus, static_cast<int>(g.tails.size())};
}

// Spanning tree chosen greedily by edge order; result[i] tells whether edge i is in the tree.
inline std::vector<bool> maximal_subtree(const StableGraph& g) {
  std::map<std::string, std::string> parent;
  for (const auto& v : g.vertices) parent[v] = v;
  auto find = [&](std::string x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> in_tree(g.edges.size(), false);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.loop) continue;
    auto a = find(e.from), b = find(e.to);
    if (a == b) continue;
    parent[a] = b;
    in_tree[i] = true;
  }
  return in_tree;
}

// Unique path inside the tree from `from` to `to`.
inline EdgePath tree_path(const StableGraph& g, const std::vector<bool>& tree, const std::string& from,
                          const std::string& to) {
  std::map<std::string, int> via;  // code of the edge used to reach a vertex
  std::vector<std::string> queue{from};
  via[from] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::string v = queue[qi];
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      if (!tree[i]) continue;
      const Edge& e = g.edges[i];
      for (int sign : {1, -1}) {
        int code = edge_code(static_cast<int>(i), sign);
        if (code_source(g, code) != v) continue;
        const std::string& w = code_target(g, code);
        if (via.count(w)) continue;
        via[w] = code;
        queue.push_back(w);
      }
      (void)e;
    }
  }
  if (!via.count(to)) throw input_error("no tree path from " + from + " to " + to);
  EdgePath p;
  for (std::string v = to; v != from;) {
    int c = via[v];
    p.push_back(c);
    v = code_source(g, c);
  }
  std::reverse(p.begin(), p.end());
  return p;
}

// Path from the tail's vertex to the base vertex.
inline EdgePath tail_path(const StableGraph& g, const std::string& tail, const std::string& base) {
  require_vertex(g, base);
  const Tail& t = g.tails.at(tail_index(g, tail));
  return tree_path(g, maximal_subtree(g), t.vertex, base);
}

struct Generators {
  std::string base;
  std::vector<std::string> edges;  // the non-tree edge behind each generator
  std::vector<EdgePath> paths;
};

// Closed reduced paths at `base`, one per edge outside the spanning tree.
inline Generators fundamental_group_generators(const StableGraph& g, const std::string& base) {
  require_valid(g);
  require_vertex(g, base);
  auto tree = maximal_subtree(g);
  Generators gens;
  gens.base = base;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (tree[i]) continue;
    const Edge& e = g.edges[i];
    EdgePath p = tree_path(g, tree, base, e.from);
    p.push_back(edge_code(static_cast<int>(i), 1));
    EdgePath back = tree_path(g, tree, e.to, base);
    p.insert(p.end(), back.begin(), back.end());
    gens.edges.push_back(e.id);
    gens.paths.push_back(reduce_path(p));
  }
  return gens;
}

inline StableGraph sorted_graph(StableGraph g) {
  std::sort(g.vertices.begin(), g.vertices.end());
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  std::sort(g.tails.begin(), g.tails.end(), [](const Tail& a, const Tail& b) { return a.id < b.id; });
  std::sort(g.infinity.begin(), g.infinity.end());
  return g;
}

inline std::string fresh_id(const std::set<std::string>& used, std::string stem) {
  while (used.count(stem)) stem += "'";
  return stem;
}

struct SplitResult {
  StableGraph graph;
  std::string new_vertex;  // v_{-h0}
  std::string new_edge;    // h0, from new_vertex to v0
};

// Separates h1 and h2 from the other branches at v0 by a new edge h0.
// v0 keeps h1, h2 and h0; the new vertex v_{-h0} receives the rest.
inline SplitResult split_vertex(const StableGraph& g, const std::string& v0, const std::string& h1,
                                const std::string& h2, std::string new_vertex = {}, std::string new_edge = {}) {
  require_valid(g);
  require_vertex(g, v0);
  if (h1 == h2) throw input_error("split needs two distinct branches");
  Branch b1 = parse_branch(g, h1), b2 = parse_branch(g, h2);
  if (terminal_vertex(g, b1) != v0 || terminal_vertex(g, b2) != v0)
    throw input_error("split branches must end at " + v0);
  auto here = branches_at(g, v0);
  if (here.size() < 4) throw domain_error("vertex " + v0 + " has fewer than 4 branches; cannot split");

  std::set<std::string> used(g.vertices.begin(), g.vertices.end());
  for (const auto& e : g.edges) used.insert(e.id);
  for (const auto& t : g.tails) used.insert(t.id);
  if (new_vertex.empty()) new_vertex = fresh_id(used, v0 + "'");
  if (used.count(new_vertex)) throw input_error("id already in use: " + new_vertex);
  used.insert(new_vertex);
  if (new_edge.empty()) new_edge = fresh_id(used, "s_" + v0);
  if (used.count(new_edge)) throw input_error("id already in use: " + new_edge);

  SplitResult r{g, new_vertex, new_edge};
  StableGraph& out = r.graph;
  for (const Branch& b : here) {
    if (b == b1 || b == b2) continue;
    if (b.kind == Branch::Kind::tail) {
      out.tails[b.index].vertex = new_vertex;
    } else if (b.sign > 0) {
      out.edges[b.index].to = new_vertex;
    } else {
      out.edges[b.index].from = new_vertex;
    }
  }
  for (auto& e : out.edges) e.loop = e.from == e.to;
  out.vertices.push_back(new_vertex);
  out.edges.push_back({new_edge, new_vertex, v0, false});
  out = sorted_graph(std::move(out));
  return r;
}

// Merges v_{-e} into v_e and removes e.
inline StableGraph contract_edge(const StableGraph& g, const std::string& edge) {
  require_valid(g);
  int idx = edge_index(g, edge);
  const Edge e = g.edges[idx];
  if (e.loop) throw domain_error("cannot contract loop " + edge);
  StableGraph out;
  for (const auto& v : g.vertices)
    if (v != e.from) out.vertices.push_back(v);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (static_cast<int>(i) == idx) continue;
    Edge f = g.edges[i];
    if (f.from == e.from) f.from = e.to;
    if (f.to == e.from) f.to = e.to;
    f.loop = f.from == f.to;
    out.edges.push_back(f);
  }
  for (Tail t : g.tails) {
    if (t.vertex == e.from) t.vertex = e.to;
    out.tails.push_back(t);
  }
  for (const auto& label : g.infinity)
    if (label != edge && label != "-" + edge) out.infinity.push_back(label);
  return sorted_graph(std::move(out));
}

// Invariant of the isomorphism class (ids and orientations forgotten, tail numbers kept).
inline std::string canonical_form(const StableGraph& g) {
  std::map<std::string, std::string> color;
  for (const auto& v : g.vertices) {
    int loops = 0;
    for (const auto& e : g.edges)
      if (e.loop && e.from == v) ++loops;
    std::vector<int> nus;
    for (const auto& t : g.tails)
      if (t.vertex == v) nus.push_back(t.nu);
    std::sort(nus.begin(), nus.end());
    std::string c = "L" + std::to_string(loops) + "T";
    for (int n : nus) c += std::to_string(n) + ".";
    color[v] = c;
  }
  auto compress = [&] {
    std::set<std::string> distinct;
    for (const auto& [v, c] : color) distinct.insert(c);
    std::map<std::string, std::string> id;
    int k = 0;
    for (const auto& c : distinct) id[c] = std::to_string(k++);
    for (auto& [v, c] : color) c = id[c];
    return distinct;
  };
  std::vector<std::string> history;
  for (std::size_t round = 0; round <= g.vertices.size(); ++round) {
    std::map<std::string, std::string> next;
    for (const auto& v : g.vertices) {
      std::vector<std::string> nb;
      for (const auto& e : g.edges) {
        if (e.loop) continue;
        if (e.from == v) nb.push_back(color[e.to]);
        if (e.to == v) nb.push_back(color[e.from]);
      }
      std::sort(nb.begin(), nb.end());
      std::string c = color[v] + "(";
      for (const auto& s : nb) c += s + ",";
      next[v] = c + ")";
    }
    color = next;
    auto distinct = compress();
    std::string snapshot;
    for (const auto& d : distinct) snapshot += d + ";";
    history.push_back(snapshot);
  }
  std::vector<std::string> vc, ec;
  for (const auto& v : g.vertices) vc.push_back(color[v]);
  for (const auto& e : g.edges) {
    std::string a = color[e.from], b = color[e.to];
    if (b < a) std::swap(a, b);
    ec.push_back(a + "-" + b);
  }
  std::sort(vc.begin(), vc.end());
  std::sort(ec.begin(), ec.end());
  std::string out;
  for (const auto& h : history) out += h + "|";
  for (const auto& s : vc) out += s + " ";
  out += "/";
  for (const auto& s : ec) out += s + " ";
  return out;
}

inline StableGraph graph_from_json(const nlohmann::json& j) {
  try {
    StableGraph g;
    for (const auto& v : j.at("vertices")) g.vertices.push_back(v.get<std::string>());
    if (j.contains("edges"))
      for (const auto& e : j.at("edges")) {
        Edge ed{e.at("id").get<std::string>(), e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                false};
        ed.loop = e.contains("loop") ? e.at("loop").get<bool>() : ed.from == ed.to;
        g.edges.push_back(ed);
      }
    if (j.contains("tails"))
      for (const auto& t : j.at("tails"))
        g.tails.push_back({t.at("id").get<std::string>(), t.at("vertex").get<std::string>(), t.at("nu").get<int>()});
    if (j.contains("infinity"))
      for (const auto& s : j.at("infinity")) g.infinity.push_back(s.get<std::string>());
    return sorted_graph(std::move(g));
  } catch (const nlohmann::json::exception& ex) {
    throw input_error(std::string("malformed graph JSON: ") + ex.what());
  }
}

inline nlohmann::json graph_to_json(const StableGraph& g) {
  nlohmann::json j;
  j["vertices"] = g.vertices;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges) j["edges"].push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"loop", e.loop}});
  j["tails"] = nlohmann::json::array();
  for (const auto& t : g.tails) j["tails"].push_back({{"id", t.id}, {"vertex", t.vertex}, {"nu", t.nu}});
  j["infinity"] = g.infinity;
  return j;
}

}  // namespace sforge
