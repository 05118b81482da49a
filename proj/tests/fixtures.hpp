#pragma once

#include <string>

#include "sforge/graph.hpp"

namespace fixtures {

using sforge::StableGraph;

// One vertex carrying g loops and n tails.
inline StableGraph rose(int g, int n) {
  StableGraph G;
  G.vertices = {"v"};
  for (int i = 1; i <= g; ++i) G.edges.push_back({"l" + std::to_string(i), "v", "v", true});
  for (int i = 1; i <= n; ++i) G.tails.push_back({"t" + std::to_string(i), "v", i});
  return sforge::sorted_graph(G);
}

// Central vertex v0 with the tails; loop l_i at v_i joined to v0 by e_i (v_{e_i} = v0).
inline StableGraph lollipop(int g, int n) {
  StableGraph G;
  G.vertices = {"v0"};
  for (int i = 1; i <= g; ++i) {
    std::string k = std::to_string(i);
    G.vertices.push_back("v" + k);
    G.edges.push_back({"e" + k, "v" + k, "v0", false});
    G.edges.push_back({"l" + k, "v" + k, "v" + k, true});
  }
  for (int i = 1; i <= n; ++i) G.tails.push_back({"t" + std::to_string(i), "v0", i});
  return sforge::sorted_graph(G);
}

// Two vertices joined by three edges, tails split between them.
inline StableGraph theta(int n_a, int n_b) {
  StableGraph G;
  G.vertices = {"a", "b"};
  for (int i = 1; i <= 3; ++i) G.edges.push_back({"f" + std::to_string(i), "a", "b", false});
  int nu = 1;
  for (int i = 0; i < n_a; ++i, ++nu) G.tails.push_back({"t" + std::to_string(nu), "a", nu});
  for (int i = 0; i < n_b; ++i, ++nu) G.tails.push_back({"t" + std::to_string(nu), "b", nu});
  return sforge::sorted_graph(G);
}

}  // namespace fixtures

#include <random>
#include <vector>

namespace fixtures {

// Random stable graph of type (g, n): random splits starting from a rose.
inline StableGraph random_stable_graph(std::mt19937& rng, int g, int n, int splits) {
  StableGraph G = rose(g, n);
  for (int s = 0; s < splits; ++s) {
    std::vector<std::string> candidates;
    for (const auto& v : G.vertices)
      if (sforge::branches_at(G, v).size() >= 4) candidates.push_back(v);
    if (candidates.empty()) break;
    std::string v = candidates[rng() % candidates.size()];
    auto br = sforge::branches_at(G, v);
    std::size_t i = rng() % br.size(), j = rng() % (br.size() - 1);
    if (j >= i) ++j;
    G = sforge::split_vertex(G, v, sforge::branch_label(G, br[i]), sforge::branch_label(G, br[j]),
                             "w" + std::to_string(s), "s" + std::to_string(s))
            .graph;
  }
  return G;
}

}  // namespace fixtures

#include "sforge/params.hpp"

namespace fixtures {

// Genus 1: one loop with (x_l, x_-l) = (0, inf), one tail at 1.
inline sforge::RawParams genus1_params(const std::string& y = "1/50") {
  sforge::RawParams p;
  p.x["l1"] = "0";
  p.x["-l1"] = "inf";
  p.x["t1"] = "1";
  p.y["l1"] = y;
  return p;
}

// Rose with two loops and one tail: x = (0, 1), (3, 6), tail at 10.
inline sforge::RawParams rose2_params() {
  sforge::RawParams p;
  p.x["l1"] = "0";
  p.x["-l1"] = "1";
  p.x["l2"] = "3";
  p.x["-l2"] = "6";
  p.x["t1"] = "10";
  p.y["l1"] = nlohmann::json::array({0.01, 0.0});
  p.y["l2"] = nlohmann::json::array({0.008, 0.002});
  return p;
}

// Lollipop(2, n) with rational points.
inline sforge::RawParams lollipop2_params(int n) {
  sforge::RawParams p;
  p.x["e1"] = "0";
  p.x["-e1"] = "2";
  p.x["l1"] = "1";
  p.x["-l1"] = "3";
  p.x["e2"] = "5";
  p.x["-e2"] = "1/2";
  p.x["l2"] = "-2";
  p.x["-l2"] = "4";
  for (int i = 1; i <= n; ++i) p.x["t" + std::to_string(i)] = std::to_string(10 * i + 1) + "/3";
  p.y["e1"] = "1/100";
  p.y["l1"] = "1/100";
  p.y["e2"] = "1/100";
  p.y["l2"] = "1/100";
  return p;
}

// Theta graph a=b via f1,f2,f3 with tails split (n_a at a, n_b at b).
inline sforge::RawParams theta_params(int n_a, int n_b) {
  sforge::RawParams p;
  p.x["f1"] = "0";
  p.x["-f1"] = "7";
  p.x["f2"] = "1";
  p.x["-f2"] = "2";
  p.x["f3"] = "-3";
  p.x["-f3"] = "5";
  for (int i = 1; i <= n_a + n_b; ++i) p.x["t" + std::to_string(i)] = std::to_string(7 + 2 * i) + "/2";
  for (auto e : {"f1", "f2", "f3"}) p.y[e] = "1/1000";
  return p;
}

}  // namespace fixtures

namespace fixtures {

inline sforge::RawParams lollipop1_params(int n) {
  sforge::RawParams p;
  p.x["e1"] = "0";
  p.x["-e1"] = "2";
  p.x["l1"] = "1";
  p.x["-l1"] = "3";
  for (int i = 1; i <= n; ++i) p.x["t" + std::to_string(i)] = std::to_string(10 * i + 1) + "/3";
  p.y["e1"] = "1/100";
  p.y["l1"] = "1/100";
  return p;
}

// Trivalent graph of type (2, 1): the theta graph with its tail vertex split off.
inline StableGraph trivalent21() {
  return sforge::split_vertex(theta(1, 0), "a", "-f1", "t1", "c", "s").graph;
}

inline sforge::RawParams trivalent21_params() {
  sforge::RawParams p = theta_params(1, 0);
  p.x["s"] = "0";
  p.x["-s"] = "1";
  p.y["s"] = "1/1000";
  return p;
}

}  // namespace fixtures
