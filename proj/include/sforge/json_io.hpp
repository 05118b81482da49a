#pragma once

#include <complex>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "sforge/kz.hpp"
#include "sforge/linalg.hpp"
#include "sforge/monodromy.hpp"
#include "sforge/params.hpp"
#include "sforge/restriction.hpp"
#include "sforge/series.hpp"

namespace sforge {

using nlohmann::json;

inline json to_json_value(const Rational& q) { return to_string(q); }
inline json to_json_value(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline json to_json_value(const TruncatedSeries& s) {
  json j;
  const auto& space = s.space();
  j["vars"] = space ? space->vars() : std::vector<std::string>{};
  j["cutoff"] = s.cutoff();
  j["terms"] = json::array();
  const int n = space ? space->nvars() : 0;
  for (const auto& [m, c] : s.terms())
    j["terms"].push_back({{"exp", unpack_monomial(m, n)}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
  return j;
}

template <class T>
json matrix_json(const Matrix<T>& m) {
  json j = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& v : row) r.push_back(to_json_value(v));
    j.push_back(std::move(r));
  }
  return j;
}

// [{word: [letters], coeff}], words in short-lex order.
template <class C>
json nc_terms_json(const NCSeries<C>& s) {
  json terms = json::array();
  for (const auto& [w, c] : s.terms()) {
    json word = json::array();
    for (int a : w) word.push_back(s.alphabet()->name(a));
    terms.push_back({{"word", word}, {"coeff", to_json_value(c)}});
  }
  return terms;
}

template <class C>
json nc_series_json(const NCSeries<C>& s) {
  return {{"letters", s.alphabet() ? s.alphabet()->letters() : std::vector<std::string>{}},
          {"weight", s.weight()},
          {"terms", nc_terms_json(s)}};
}

inline json assignment_json(const ResidueAssignment& a) {
  json X = json::object();
  for (const auto& [h, x] : a.X) X[h] = nc_terms_json(x);
  json sums = json::object();
  for (const auto& [v, s] : a.vertex_sums()) sums[v] = nc_terms_json(s);
  std::vector<std::string> elliptic(a.elliptic.begin(), a.elliptic.end());
  return {{"graph", graph_to_json(a.graph)},
          {"letters", a.alphabet->letters()},
          {"weight", a.W},
          {"eliminated", a.eliminated},
          {"elliptic", elliptic},
          {"X", X},
          {"vertex_sums", sums},
          {"antisymmetric", a.antisymmetric()},
          {"balanced", a.balanced()}};
}

// {component, poles: [{at, order, residue}], polynomial}
inline json restriction_json(const RestrictedForm& f) {
  json poles = json::array();
  for (const auto& [a, c] : f.principal)
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j] != 0) poles.push_back({{"at", to_string(a)}, {"order", j + 1}, {"residue", to_string(c[j])}});
  json poly = json::array();
  for (const auto& c : f.polynomial) poly.push_back(to_string(c));
  return {{"component", f.vertex}, {"poles", poles}, {"polynomial", poly}, {"form", f.to_string()}};
}

inline Complex json_point_complex(const json& v) {
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_string()) return {parse_rational(v.get<std::string>()).get_d(), 0.0};
  throw input_error("expected a point as [re, im], a number or \"p/q\", got " + v.dump());
}

// {"points": [...], "tangential_start", "tangential_end"} or {"circle": {"center", "radius", "turns"}}.
inline TransportPath path_from_json(const json& j) {
  try {
    if (j.contains("circle")) {
      const auto& c = j.at("circle");
      return TransportPath::circle(json_point_complex(c.at("center")), c.at("radius").get<double>(),
                                   c.value("theta0", 0.0), c.value("turns", 1.0));
    }
    std::vector<Complex> pts;
    for (const auto& p : j.at("points")) pts.push_back(json_point_complex(p));
    return TransportPath::polyline(pts, j.value("tangential_start", false), j.value("tangential_end", false));
  } catch (const json::exception& ex) {
    throw input_error(std::string("malformed path JSON: ") + ex.what());
  }
}

// {"base_tail", "legs": [{"vertex", "entry", "exit"}], "half_turns": [...]}
inline CombinatorialPath combinatorial_path_from_json(const json& j) {
  try {
    CombinatorialPath p;
    p.base_tail = j.at("base_tail").get<std::string>();
    for (const auto& l : j.at("legs"))
      p.legs.push_back({l.at("vertex").get<std::string>(), l.at("entry").get<std::string>(),
                        l.at("exit").get<std::string>()});
    if (j.contains("half_turns")) p.half_turns = j.at("half_turns").get<std::vector<int>>();
    return p;
  } catch (const json::exception& ex) {
    throw input_error(std::string("malformed path JSON: ") + ex.what());
  }
}

namespace detail {

inline std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline void flatten(const json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "/" + it.key(), out);
  } else if (j.is_array() && !j.empty()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "/" + std::to_string(i), out);
  } else {
    out << csv_field(path) << "," << csv_field(j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace detail

// One "path,value" row per leaf.
inline std::string json_to_csv(const json& j) {
  std::ostringstream out;
  out << "path,value\n";
  detail::flatten(j, "", out);
  return out.str();
}

}  // namespace sforge
