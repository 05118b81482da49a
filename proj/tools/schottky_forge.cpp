// schottky-forge: command-line front end.
// Exit codes: 0 ok, 1 domain failure, 2 input error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "sforge/sforge.hpp"

using namespace sforge;

namespace {

struct JobConfig {
  std::string ring = "complex";
  int L = 6;
  int D = 4;
  int W = 4;
  double tol = 1e-8;
  int threads = 1;
  std::string out;
  std::string format = "json";
};

// Command result: report plus exit status (validation failures still emit a report).
struct Outcome {
  json report;
  int status = 0;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw input_error("parse error in " + path + ": " + e.what());
  }
}

StableGraph read_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

std::string pick_base(const StableGraph& g, const std::string& requested) {
  if (!requested.empty()) {
    require_vertex(g, requested);
    return requested;
  }
  if (!g.tails.empty()) return g.tails.front().vertex;
  if (g.vertices.empty()) throw input_error("graph has no vertices");
  return g.vertices.front();
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

void check_cutoffs(const JobConfig& c, bool formal) {
  if (c.L < 1 || c.D < 1 || c.W < 1) throw input_error("cutoffs must be positive");
  if (!(c.tol > 0)) throw input_error("tolerance must be positive");
  if (c.threads < 1) throw input_error("thread count must be positive");
  if (formal && c.L < c.D) throw input_error("formal jobs need wordlen >= degree");
}

// ---- validate ----

Outcome cmd_validate(const std::string& graph_path) {
  auto g = read_graph(graph_path);
  auto violations = validate_stable(g);
  json r{{"valid", violations.empty()}, {"violations", violations}};
  if (violations.empty()) {
    auto [genus, n] = type_of(g);
    r["type"] = {genus, n};
  }
  return {r, violations.empty() ? 0 : 1};
}

// ---- periods ----

template <class T>
json periods_over(const StableGraph& g, const RawParams& raw, const std::string& base, const JobConfig& c) {
  const bool formal = std::is_same_v<T, TruncatedSeries>;
  auto grp = build_group(g, make_params<T>(g, raw, formal ? c.D : 0), base, c.L);
  auto P = period_matrix(grp, c.L);
  json r{{"ring", c.ring}, {"wordlen", c.L}, {"base", base}, {"genus", grp.genus()}, {"P", matrix_json(P.P)}};
  if (formal) r["degree"] = c.D;
  if constexpr (std::is_same_v<T, Complex>) {
    const int n = grp.genus();
    const Complex z0 = default_base_point(grp);
    Matrix<double> b_res(n, std::vector<double>(n)), a_res(n, std::vector<double>(n));
    double b_max = 0, a_max = 0;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        Complex b = b_period_numeric(grp, i, j, z0, c.L);
        b_res[i - 1][j - 1] = std::abs(std::exp(b) / P.P[i - 1][j - 1] - 1.0);
        Complex a = a_cycle_integral(grp, i, j, c.L);
        a_res[i - 1][j - 1] = std::abs(a - (i == j ? Complex(0, 2 * M_PI) : Complex(0)));
        b_max = std::max(b_max, b_res[i - 1][j - 1]);
        a_max = std::max(a_max, a_res[i - 1][j - 1]);
      }
    r["oracle"] = {{"base_point", to_json_value(z0)},
                   {"b_period_residual", b_res},
                   {"a_cycle_residual", a_res},
                   {"max_b_period_residual", b_max},
                   {"max_a_cycle_residual", a_max},
                   {"tolerance", c.tol},
                   {"within_tolerance", b_max < c.tol && a_max < c.tol}};
  }
  return r;
}

Outcome cmd_periods(const std::string& graph_path, const std::string& params_path, const std::string& base_opt,
                    const JobConfig& c) {
  check_cutoffs(c, c.ring == "series");
  auto g = read_graph(graph_path);
  auto raw = params_from_json(read_json_file(params_path));
  require_valid(g);
  auto base = pick_base(g, base_opt);
  if (c.ring == "complex") return {periods_over<Complex>(g, raw, base, c)};
  if (c.ring == "rational") return {periods_over<Rational>(g, raw, base, c)};
  return {periods_over<TruncatedSeries>(g, raw, base, c)};
}

// ---- differentials ----

template <class T>
json sample_values(const StableGraph& g, const RawParams& raw, const std::string& base, const DifferentialSpec& spec,
                   const std::vector<std::string>& at, const JobConfig& c) {
  const bool formal = std::is_same_v<T, TruncatedSeries>;
  auto grp = build_group(g, make_params<T>(g, raw, formal ? c.D : 0), base, c.L);
  auto f = make_differential(grp, spec, c.L);
  json out = json::array();
  for (const auto& s : at) {
    json pt;
    try {
      pt = json::parse(s);
    } catch (const json::parse_error&) {
      pt = s;
    }
    T z = json_scalar<T>(pt, grp.like());
    out.push_back({{"z", pt}, {"value", to_json_value(f(z))}});
  }
  return out;
}

std::map<std::string, RestrictedForm> restrictions(const StableGraph& g, const RawParams& raw, const std::string& base,
                                                   const DifferentialSpec& spec, const std::vector<std::string>& comps,
                                                   int L) {
  RestrictionOptions opt;
  opt.L = L;
  auto forms = parallel_map<RestrictedForm>(
      comps.size(), [&](std::size_t i) { return restrict_to_component(g, raw, base, spec, comps[i], opt); });
  std::map<std::string, RestrictedForm> out;
  for (std::size_t i = 0; i < comps.size(); ++i) out[comps[i]] = forms[i];
  return out;
}

json balance_json(const StableGraph& g, const RawParams& raw, const std::map<std::string, RestrictedForm>& forms) {
  json out = json::array();
  for (const auto& nb : node_balance(g, raw, forms))
    out.push_back({{"edge", nb.edge},
                   {"residue_at_x_e", to_string(nb.at_plus)},
                   {"residue_at_x_minus_e", to_string(nb.at_minus)},
                   {"balanced", nb.balanced()}});
  return out;
}

Outcome cmd_differentials(const std::string& graph_path, const std::string& params_path, const std::string& kind,
                          const std::string& component, const std::vector<std::string>& at,
                          const std::string& base_opt, int restriction_L, const JobConfig& c) {
  check_cutoffs(c, c.ring == "series");
  auto spec = parse_differential_spec(kind);
  auto g = read_graph(graph_path);
  auto raw = params_from_json(read_json_file(params_path));
  require_valid(g);
  auto base = pick_base(g, base_opt);
  std::vector<std::string> comps = g.vertices;
  if (!component.empty()) {
    require_vertex(g, component);
    comps = {component};
  }
  auto forms = restrictions(g, raw, base, spec, comps, restriction_L);
  json tables = json::array();
  for (const auto& v : comps) tables.push_back(restriction_json(forms.at(v)));
  json r{{"kind", spec.to_string()}, {"base", base}, {"restriction_wordlen", restriction_L}, {"restrictions", tables}};
  if (component.empty()) r["node_balance"] = balance_json(g, raw, forms);
  if (!at.empty()) {
    if (c.ring == "complex")
      r["values"] = sample_values<Complex>(g, raw, base, spec, at, c);
    else if (c.ring == "rational")
      r["values"] = sample_values<Rational>(g, raw, base, spec, at, c);
    else
      r["values"] = sample_values<TruncatedSeries>(g, raw, base, spec, at, c);
    r["ring"] = c.ring;
    r["wordlen"] = c.L;
  }
  return {r};
}

// ---- degenerate ----

std::vector<DifferentialSpec> standard_specs(const StableGraph& g, const std::string& base) {
  std::vector<DifferentialSpec> out;
  const int genus = type_of(g).first;
  for (int i = 1; i <= genus; ++i) out.push_back(parse_differential_spec("first:" + std::to_string(i)));
  for (const auto& t : g.tails) {
    if (t.vertex == base)
      for (int k = 2; k <= 3; ++k) out.push_back(parse_differential_spec("second:" + t.id + "," + std::to_string(k)));
    for (const auto& s : g.tails)
      if (t.id < s.id) out.push_back(parse_differential_spec("third:" + t.id + "," + s.id));
  }
  return out;
}

Outcome cmd_degenerate(const std::string& graph_path, const std::string& params_path, const std::string& edges,
                       const std::string& base_opt, int restriction_L, const JobConfig& c) {
  check_cutoffs(c, true);
  auto g = read_graph(graph_path);
  auto raw = params_from_json(read_json_file(params_path));
  require_valid(g);
  auto base = pick_base(g, base_opt);
  std::vector<std::string> chosen;
  if (edges == "all")
    for (const auto& e : g.edges) chosen.push_back(e.id);
  else if (edges != "none")
    chosen = split_list(edges, ',');
  std::vector<int> vars;
  for (const auto& id : chosen) vars.push_back(edge_index(g, id));
  std::sort(vars.begin(), vars.end());
  if (std::adjacent_find(vars.begin(), vars.end()) != vars.end()) throw input_error("edge listed twice");

  auto grp = build_group(g, make_params<TruncatedSeries>(g, raw, c.D), base, c.L);
  auto P = period_matrix(grp, c.L).P;
  auto after = P;
  json changed = json::array();
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = 0; j < P.size(); ++j) {
      after[i][j] = P[i][j].with_zero(vars);
      if (!(after[i][j] == P[i][j])) changed.push_back({i + 1, j + 1});
    }
  json r{{"edges", chosen},          {"base", base},   {"degree", c.D},          {"wordlen", c.L},
         {"P_before", matrix_json(P)}, {"P_after", matrix_json(after)}, {"changed_entries", changed}};
  r["identity"] = changed.empty();
  json comps = json::array();
  if (!g.edges.empty() && vars.size() == g.edges.size()) {
    for (const auto& spec : standard_specs(g, base)) {
      auto forms = restrictions(g, raw, base, spec, g.vertices, restriction_L);
      json tables = json::array();
      for (const auto& v : g.vertices) tables.push_back(restriction_json(forms.at(v)));
      comps.push_back({{"kind", spec.to_string()}, {"restrictions", tables}, {"node_balance", balance_json(g, raw, forms)}});
    }
  }
  r["components"] = comps;
  return {r};
}

// ---- invariants ----

template <class T>
Moebius<T> lift_moebius(const Moebius<Rational>& m, const T& like) {
  auto f = [&](const Rational& q) { return ring_traits<T>::from_rational(q, like); };
  return {f(m.a), f(m.b), f(m.c), f(m.d)};
}

template <class T>
InvariantReport invariants_over(const StableGraph& g, const RawParams& raw, const ConjugatedData& conj,
                                const std::string& base, const Moebius<Rational>& mu, bool perturbed,
                                const JobConfig& c) {
  const int D = std::is_same_v<T, TruncatedSeries> ? c.D : 0;
  GroupOptions opt;
  opt.reject_infinity_at_base = false;
  auto g1 = build_group(g, make_params<T>(g, raw, D), base, c.L, opt);
  auto g2 = build_group(conj.graph, make_params<T>(conj.graph, conj.raw, D), base, c.L, opt);
  std::optional<Moebius<T>> m;
  if (!perturbed) m = lift_moebius(mu, g1.like());
  return conjugation_invariant_report(g1, g2, c.L, m, c.tol);
}

Outcome cmd_invariants(const std::string& graph_path, const std::string& params_path, const std::string& conjugator,
                       const std::vector<std::string>& perturb, const std::string& base_opt, const JobConfig& c) {
  check_cutoffs(c, c.ring == "series");
  auto g = read_graph(graph_path);
  auto raw = params_from_json(read_json_file(params_path));
  require_valid(g);
  auto base = pick_base(g, base_opt);
  auto parts = split_list(conjugator, ',');
  if (parts.size() != 4) throw input_error("conjugator must be four rationals a,b,c,d");
  Moebius<Rational> mu{parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2]),
                       parse_rational(parts[3])};
  auto conj = conjugate_params(g, raw, mu);
  for (const auto& p : perturb) {
    auto eq = p.find('=');
    if (eq == std::string::npos) throw input_error("perturbation must look like branch=value");
    std::string label = p.substr(0, eq);
    parse_branch(g, label);
    conj.raw.x[label] = p.substr(eq + 1);
    conj.graph.infinity.erase(std::remove(conj.graph.infinity.begin(), conj.graph.infinity.end(), label),
                              conj.graph.infinity.end());
  }
  InvariantReport rep;
  const bool perturbed = !perturb.empty();
  if (c.ring == "complex")
    rep = invariants_over<Complex>(g, raw, conj, base, mu, perturbed, c);
  else if (c.ring == "rational")
    rep = invariants_over<Rational>(g, raw, conj, base, mu, perturbed, c);
  else
    rep = invariants_over<TruncatedSeries>(g, raw, conj, base, mu, perturbed, c);
  json r{{"ring", c.ring},
         {"wordlen", c.L},
         {"conjugator", parts},
         {"perturbed", perturb},
         {"words", rep.words},
         {"multiplier_checks", rep.multiplier_checks},
         {"cross_ratio_checks", rep.cross_ratio_checks},
         {"conjugator_checked", rep.conjugator_checked},
         {"conjugator_ok", rep.conjugator_ok},
         {"discrepancies", rep.discrepancies},
         {"agree", rep.agree()}};
  return {r, rep.agree() ? 0 : 1};
}

// ---- kz ----

// "contract:e" or "split:v0:h1,h2[:new_vertex:new_edge]"
ResidueAssignment apply_moves(ResidueAssignment a, const std::vector<std::string>& moves) {
  for (const auto& m : moves) {
    auto parts = split_list(m, ':');
    if (parts.size() == 2 && parts[0] == "contract") {
      a = apply_expansion_rule(a, parts[1]);
    } else if (parts[0] == "split" && (parts.size() == 3 || parts.size() == 5)) {
      auto hs = split_list(parts[2], ',');
      if (hs.size() != 2) throw input_error("split move needs two branches: " + m);
      a = expand_assignment(a, parts[1], hs[0], hs[1], parts.size() == 5 ? parts[3] : "",
                            parts.size() == 5 ? parts[4] : "");
    } else {
      throw input_error("unknown move: " + m);
    }
  }
  return a;
}

std::vector<std::string> moves_from_json(const json& j) {
  if (!j.contains("moves")) return {};
  try {
    return j.at("moves").get<std::vector<std::string>>();
  } catch (const json::exception&) {
    throw input_error("moves must be a list of strings");
  }
}

Outcome cmd_kz_assignment(const std::string& graph_path, const std::string& eliminate,
                          const std::vector<std::string>& moves, const JobConfig& c) {
  check_cutoffs(c, false);
  auto a = apply_moves(base_assignment(read_graph(graph_path), c.W, eliminate), moves);
  auto r = assignment_json(a);
  r["moves"] = moves;
  return {r, a.balanced() ? 0 : 1};
}

MonodromyOptions monodromy_options(const JobConfig& c) {
  MonodromyOptions o;
  o.tolerance = std::max(c.tol, 1e-6);
  return o;
}

Outcome cmd_kz_monodromy(const std::string& graph_path, const std::string& path_file, const JobConfig& c) {
  check_cutoffs(c, false);
  auto g = read_graph(graph_path);
  auto spec = read_json_file(path_file);
  auto a = apply_moves(base_assignment(g, c.W), moves_from_json(spec));
  std::string vertex;
  std::map<std::string, ProjectivePoint<Rational>> x;
  TransportPath path;
  try {
    vertex = spec.at("vertex").get<std::string>();
    for (auto it = spec.at("x").begin(); it != spec.at("x").end(); ++it)
      x[it.key()] = json_point<Rational>(it.value(), Rational(0));
    path = path_from_json(spec.at("path"));
  } catch (const json::exception& e) {
    throw input_error(std::string("malformed monodromy job: ") + e.what());
  }
  auto form = kz_form_on_component(a, vertex, x);
  auto res = kz_monodromy(form, path, c.W, monodromy_options(c));
  auto gl = nc_grouplike_report(res.value, 1e-6);
  json r = nc_series_json(res.value);
  r["vertex"] = vertex;
  r["extrapolation_residual"] = res.residual;
  r["grouplike"] = gl.grouplike;
  r["grouplike_defect"] = gl.max_defect;
  return {r};
}

Outcome cmd_kz_mzv(const std::string& index) {
  auto s = parse_mzv_index(index);
  auto v = mzv_mp(s);
  std::ostringstream digits;
  digits << std::setprecision(40) << v;
  return {{{"index", s}, {"value", static_cast<double>(v)}, {"digits", digits.str()}}};
}

Outcome cmd_kz_limit(const std::string& graph_path, const std::string& path_file, const JobConfig& c) {
  check_cutoffs(c, false);
  auto g = read_graph(graph_path);
  auto spec = read_json_file(path_file);
  auto a = apply_moves(base_assignment(g, c.W), moves_from_json(spec));
  if (!spec.contains("path")) throw input_error("limit job needs a \"path\" object");
  auto path = combinatorial_path_from_json(spec.at("path"));
  auto L = limit_unipotent_period(a, path, c.W, monodromy_options(c));
  json w2 = json::array();
  bool all_rational = true;
  for (const auto& [w, coeff] : L.abstract.terms()) {
    if (w.size() != 2) continue;
    auto re = detect_rational(coeff.real() / (M_PI * M_PI), 24, 1e-6);
    bool imag_zero = std::abs(coeff.imag()) < 1e-6;
    auto im = detect_rational(coeff.imag() / M_PI, 24, 1e-6);
    bool ok = re.rational && (imag_zero || im.rational);
    all_rational = all_rational && ok;
    json word = json::array();
    for (int l : w) word.push_back(L.abstract.alphabet()->name(l));
    json e{{"word", word}, {"coeff", to_json_value(coeff)}, {"rational", ok}};
    if (re.rational) e["real_over_pi2"] = std::to_string(re.num) + "/" + std::to_string(re.den);
    if (im.rational) e["imag_over_pi"] = std::to_string(im.num) + "/" + std::to_string(im.den);
    w2.push_back(e);
  }
  json r{{"graph", graph_to_json(a.graph)},
         {"abstract", nc_series_json(L.abstract)},
         {"value", nc_series_json(L.value)},
         {"extrapolation_residual", L.residual},
         {"weight2", w2},
         {"weight2_rational", all_rational}};
  return {r, all_rational ? 0 : 1};
}

// ---- output ----

void emit(const Outcome& o, const JobConfig& c) {
  std::string text = c.format == "csv" ? json_to_csv(o.report) : o.report.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::string tmp = c.out + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw input_error("cannot write " + c.out);
    f << text;
    if (!f) throw input_error("cannot write " + c.out);
  }
  std::filesystem::rename(tmp, c.out);
}

void load_config_file(const std::string& path, JobConfig& c) {
  auto j = read_json_file(path);
  try {
    c.ring = j.value("ring", c.ring);
    c.L = j.value("wordlen", c.L);
    c.D = j.value("degree", c.D);
    c.W = j.value("weight", c.W);
    c.tol = j.value("tol", c.tol);
    c.threads = j.value("threads", c.threads);
    c.format = j.value("format", c.format);
    c.out = j.value("out", c.out);
  } catch (const json::exception& e) {
    throw input_error(std::string("bad config file: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schottky uniformization, degenerations and KZ residue data"};
  app.require_subcommand(1);
  app.fallthrough();

  JobConfig flags;
  std::string config_path;
  auto* o_ring = app.add_option("--ring", flags.ring, "coefficient ring")
                     ->check(CLI::IsMember({"rational", "complex", "series"}));
  auto* o_L = app.add_option("--wordlen", flags.L, "word length cutoff L");
  auto* o_D = app.add_option("--degree", flags.D, "series degree cutoff D");
  auto* o_W = app.add_option("--weight", flags.W, "KZ weight cutoff W");
  auto* o_tol = app.add_option("--tol", flags.tol, "numerical tolerance");
  auto* o_threads = app.add_option("--threads", flags.threads, "worker threads");
  auto* o_out = app.add_option("--out", flags.out, "output file (default stdout)");
  auto* o_format = app.add_option("--format", flags.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--config", config_path, "JSON file with default flag values");

  std::string graph, params, base, kind, component, edges = "all", conjugator = "2,1,1,3", eliminate, path_file, index;
  std::vector<std::string> at, perturb, moves;
  int restriction_L = 4;

  auto* validate = app.add_subcommand("validate", "check stability of a graph");
  validate->add_option("graph", graph, "graph JSON")->required();

  auto* periods = app.add_subcommand("periods", "multiplicative period matrix");
  periods->add_option("graph", graph)->required();
  periods->add_option("params", params)->required();
  periods->add_option("--base", base, "base vertex");

  auto* diffs = app.add_subcommand("differentials", "restriction tables and sampled values");
  diffs->add_option("graph", graph)->required();
  diffs->add_option("params", params)->required();
  diffs->add_option("--kind", kind, "first:i | second:t,k | third:t1,t2")->required();
  diffs->add_option("--component", component, "single component");
  diffs->add_option("--at", at, "sample point: [re,im], number or \"p/q\" (repeatable)")->allow_extra_args(false);
  diffs->add_option("--base", base, "base vertex");
  diffs->add_option("--restriction-wordlen", restriction_L, "word length for restrictions");

  auto* degen = app.add_subcommand("degenerate", "set y_e = 0 on an edge subset");
  degen->add_option("graph", graph)->required();
  degen->add_option("params", params)->required();
  degen->add_option("--edges", edges, "comma-separated edge ids, \"all\" or \"none\"");
  degen->add_option("--base", base, "base vertex");
  degen->add_option("--restriction-wordlen", restriction_L, "word length for restrictions");

  auto* inv = app.add_subcommand("invariants", "conjugation invariants against a rational conjugate");
  inv->add_option("graph", graph)->required();
  inv->add_option("params", params)->required();
  inv->add_option("--conjugator", conjugator, "a,b,c,d");
  inv->add_option("--perturb", perturb, "branch=value applied to the conjugate");
  inv->add_option("--base", base, "base vertex");

  auto* kz = app.add_subcommand("kz", "KZ residue data, monodromy and zeta values");
  kz->require_subcommand(1);
  kz->fallthrough();
  auto* kz_assign = kz->add_subcommand("assignment", "residue assignment");
  kz_assign->add_option("graph", graph)->required();
  kz_assign->add_option("--eliminate", eliminate, "tail whose letter is eliminated");
  kz_assign->add_option("--move", moves, "contract:e or split:v:h1,h2[:vertex:edge]");
  auto* kz_mono = kz->add_subcommand("monodromy", "transport of the KZ form on one component");
  kz_mono->add_option("graph", graph)->required();
  kz_mono->add_option("job", path_file, "JSON with vertex, x, path, moves")->required();
  auto* kz_mzv = kz->add_subcommand("mzv", "multiple zeta value");
  kz_mzv->add_option("index", index, "comma-separated integers")->required();
  auto* kz_limit = kz->add_subcommand("limit", "limit unipotent period along a combinatorial path");
  kz_limit->add_option("graph", graph)->required();
  kz_limit->add_option("job", path_file, "JSON with path and moves")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  JobConfig c;
  try {
    if (!config_path.empty()) load_config_file(config_path, c);
    if (o_ring->count()) c.ring = flags.ring;
    if (o_L->count()) c.L = flags.L;
    if (o_D->count()) c.D = flags.D;
    if (o_W->count()) c.W = flags.W;
    if (o_tol->count()) c.tol = flags.tol;
    if (o_threads->count()) c.threads = flags.threads;
    if (o_out->count()) c.out = flags.out;
    if (o_format->count()) c.format = flags.format;
    if (c.ring != "rational" && c.ring != "complex" && c.ring != "series") throw input_error("unknown ring " + c.ring);
    if (c.format != "json" && c.format != "csv") throw input_error("unknown format " + c.format);
    check_cutoffs(c, false);
    default_threads() = c.threads;

    Outcome o;
    if (*validate)
      o = cmd_validate(graph);
    else if (*periods)
      o = cmd_periods(graph, params, base, c);
    else if (*diffs)
      o = cmd_differentials(graph, params, kind, component, at, base, restriction_L, c);
    else if (*degen)
      o = cmd_degenerate(graph, params, edges, base, restriction_L, c);
    else if (*inv)
      o = cmd_invariants(graph, params, conjugator, perturb, base, c);
    else if (*kz_assign)
      o = cmd_kz_assignment(graph, eliminate, moves, c);
    else if (*kz_mono)
      o = cmd_kz_monodromy(graph, path_file, c);
    else if (*kz_mzv)
      o = cmd_kz_mzv(index);
    else if (*kz_limit)
      o = cmd_kz_limit(graph, path_file, c);
    emit(o, c);
    return o.status;
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: parse error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
