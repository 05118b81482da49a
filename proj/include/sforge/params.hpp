#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "sforge/graph.hpp"
#include "sforge/moebius.hpp"

namespace sforge {

// Parameter file contents before conversion to a coefficient ring:
// {"x": {branch label: value}, "y": {edge id: value}}.
// Values: "p/q", decimal string, integer, [re, im], or "inf".
struct RawParams {
  std::map<std::string, nlohmann::json> x;
  std::map<std::string, nlohmann::json> y;
};

inline RawParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw input_error("parameter file must be a JSON object");
  RawParams p;
  if (j.contains("x"))
    for (auto it = j.at("x").begin(); it != j.at("x").end(); ++it) p.x[it.key()] = it.value();
  if (j.contains("y"))
    for (auto it = j.at("y").begin(); it != j.at("y").end(); ++it) p.y[it.key()] = it.value();
  return p;
}

inline nlohmann::json params_to_json(const RawParams& p) {
  nlohmann::json j;
  j["x"] = nlohmann::json::object();
  j["y"] = nlohmann::json::object();
  for (const auto& [k, v] : p.x) j["x"][k] = v;
  for (const auto& [k, v] : p.y) j["y"][k] = v;
  return j;
}

inline bool is_inf_value(const nlohmann::json& v) { return v.is_string() && (v == "inf" || v == "infinity"); }

inline Rational json_rational(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw input_error("expected an exact rational value, got " + v.dump());
}

inline Complex json_complex(const nlohmann::json& v) {
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_string()) return {parse_rational(v.get<std::string>()).get_d(), 0.0};
  throw input_error("expected a complex value, got " + v.dump());
}

template <class T>
T json_scalar(const nlohmann::json& v, const T& like) {
  if constexpr (std::is_same_v<T, Complex>)
    return json_complex(v);
  else
    return ring_traits<T>::from_rational(json_rational(v), like);
}

template <class T>
ProjectivePoint<T> json_point(const nlohmann::json& v, const T& like) {
  if (is_inf_value(v)) return ProjectivePoint<T>::infinity(like);
  return ProjectivePoint<T>::finite(json_scalar<T>(v, like));
}

// Parameters over a ring: branch points x_h and edge multipliers y_e.
template <class T>
struct GroupParams {
  std::map<std::string, ProjectivePoint<T>> x;
  std::map<std::string, T> y;
  T like{};  // carries the series space
};

// Checks coverage of the graph and converts. For the series ring the y_e become
// the variables of a space with cutoff D, and the file's y values are ignored.
template <class T>
GroupParams<T> make_params(const StableGraph& g, const RawParams& raw, int D = 0) {
  GroupParams<T> p;
  if constexpr (std::is_same_v<T, TruncatedSeries>) {
    std::vector<std::string> vars;
    for (const auto& e : g.edges) vars.push_back(e.id);
    p.like = TruncatedSeries(make_space(vars, D));
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    for (int s : {1, -1}) labels.push_back(branch_label(g, {Branch::Kind::edge, static_cast<int>(i), s}));
  for (const auto& t : g.tails) labels.push_back(t.id);
  for (const auto& [k, v] : raw.x)
    if (std::find(labels.begin(), labels.end(), k) == labels.end()) throw input_error("parameter for unknown branch: " + k);
  for (const auto& [k, v] : raw.y)
    if (std::none_of(g.edges.begin(), g.edges.end(), [&](const Edge& e) { return e.id == k; }))
      throw input_error("multiplier for unknown edge: " + k);
  for (const auto& label : labels) {
    bool declared_inf = std::find(g.infinity.begin(), g.infinity.end(), label) != g.infinity.end();
    auto it = raw.x.find(label);
    if (it == raw.x.end()) {
      if (!declared_inf) throw input_error("missing branch point x for " + label);
      p.x[label] = ProjectivePoint<T>::infinity(p.like);
      continue;
    }
    if (declared_inf && !is_inf_value(it->second))
      throw input_error("branch " + label + " is declared at infinity but given a finite value");
    p.x[label] = json_point<T>(it->second, p.like);
  }
  for (const auto& e : g.edges) {
    if constexpr (std::is_same_v<T, TruncatedSeries>) {
      p.y[e.id] = TruncatedSeries::variable(p.like.space(), e.id);
    } else {
      auto it = raw.y.find(e.id);
      if (it == raw.y.end()) throw input_error("missing multiplier y for edge " + e.id);
      p.y[e.id] = json_scalar<T>(it->second, p.like);
    }
  }
  return p;
}

}  // namespace sforge
