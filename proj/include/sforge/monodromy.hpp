#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sforge/kz.hpp"
#include "sforge/mzv.hpp"
#include "sforge/parallel.hpp"

namespace sforge {

using CSeries = NCSeries<Complex>;

inline CSeries to_complex(const RSeries& s) {
  return s.map_coefficients([](const Rational& q) { return Complex(q.get_d(), 0.0); });
}

// Line segment or circular arc z = center + radius e^{i theta}.
struct PathPiece {
  bool arc = false;
  Complex a, b;
  Complex center;
  double radius = 0.0, theta0 = 0.0, theta1 = 0.0;

  Complex start() const { return arc ? center + std::polar(radius, theta0) : a; }
  Complex end() const { return arc ? center + std::polar(radius, theta1) : b; }
};

// Tangential ends sit on a pole; the tangent is the unit direction along the path.
struct TransportPath {
  std::vector<PathPiece> pieces;
  bool tangential_start = false;
  bool tangential_end = false;

  static TransportPath polyline(const std::vector<Complex>& pts, bool tangential_start, bool tangential_end) {
    if (pts.size() < 2) throw input_error("path needs at least two points");
    TransportPath p{{}, tangential_start, tangential_end};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) p.pieces.push_back({false, pts[i], pts[i + 1], {}, 0, 0, 0});
    return p;
  }
  // Counterclockwise for turns > 0.
  static TransportPath circle(Complex center, double radius, double theta0 = 0.0, double turns = 1.0) {
    if (!(radius > 0)) throw input_error("circle radius must be positive");
    return {{{true, {}, {}, center, radius, theta0, theta0 + 2 * M_PI * turns}}, false, false};
  }

  TransportPath reversed() const {
    TransportPath r{{}, tangential_end, tangential_start};
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
      PathPiece q = *it;
      std::swap(q.a, q.b);
      std::swap(q.theta0, q.theta1);
      r.pieces.push_back(q);
    }
    return r;
  }
};

struct MonodromyOptions {
  double epsilon = 1e-10;    // tangential cutoff; also run at epsilon/2 and epsilon/4
  double step = 0.01;        // RK4 step in the log variable near tangential ends
  int min_steps = 400;       // per unit length of smooth pieces
  double guard = 1e-6;       // minimal distance to poles away from the ends
  double tolerance = 1e-6;   // accepted extrapolation residual
};

struct MonodromyResult {
  CSeries value;
  double residual = 0.0;
};

namespace detail {

// All words of length <= W over m letters, dense, with first letter and remainder index.
struct DenseWords {
  int m, W;
  std::vector<NCWord> words;
  std::vector<int> first, rest;

  DenseWords(int letters, int weight) : m(letters), W(weight) {
    words = all_words(m, W);
    std::map<NCWord, int> index;
    for (std::size_t i = 0; i < words.size(); ++i) index[words[i]] = static_cast<int>(i);
    first.assign(words.size(), -1);
    rest.assign(words.size(), -1);
    for (std::size_t i = 1; i < words.size(); ++i) {
      first[i] = words[i][0];
      rest[i] = index.at(NCWord(words[i].begin() + 1, words[i].end()));
    }
  }
};

struct PathPoint {
  Complex anchor, offset, dz;
};

// dG/ds = (sum_a w_a(s) P_a) G with G(0) = 1, integrated by classical RK4.
class DenseTransport {
 public:
  DenseTransport(const DenseWords& dw, std::vector<Complex> poles) : dw_(dw), poles_(std::move(poles)) {
    g_.assign(dw_.words.size(), 0.0);
    g_[0] = 1.0;
  }

  // z(s) = anchor + offset(s) and z'(s) over s in [s0, s1] with n steps; z - p is formed as
  // (anchor - p) + offset so that a pole at the anchor keeps full relative precision.
  void integrate(const std::function<PathPoint(double)>& param, double s0, double s1, int n) {
    const double h = (s1 - s0) / n;
    std::vector<Complex> k1, k2, k3, k4, tmp(g_.size());
    for (int i = 0; i < n; ++i) {
      double s = s0 + i * h;
      auto w0 = forms(param(s)), wm = forms(param(s + h / 2)), w1 = forms(param(s + h));
      k1 = derivative(w0, g_);
      for (std::size_t j = 0; j < g_.size(); ++j) tmp[j] = g_[j] + (h / 2) * k1[j];
      k2 = derivative(wm, tmp);
      for (std::size_t j = 0; j < g_.size(); ++j) tmp[j] = g_[j] + (h / 2) * k2[j];
      k3 = derivative(wm, tmp);
      for (std::size_t j = 0; j < g_.size(); ++j) tmp[j] = g_[j] + h * k3[j];
      k4 = derivative(w1, tmp);
      for (std::size_t j = 0; j < g_.size(); ++j) g_[j] += (h / 6) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
  }

  const std::vector<Complex>& value() const { return g_; }

 private:
  std::vector<Complex> forms(const PathPoint& p) const {
    std::vector<Complex> w(poles_.size());
    for (std::size_t a = 0; a < poles_.size(); ++a) w[a] = p.dz / ((p.anchor - poles_[a]) + p.offset);
    return w;
  }
  std::vector<Complex> derivative(const std::vector<Complex>& w, const std::vector<Complex>& g) const {
    std::vector<Complex> d(g.size(), 0.0);
    for (std::size_t j = 1; j < g.size(); ++j) d[j] = w[dw_.first[j]] * g[dw_.rest[j]];
    return d;
  }

  const DenseWords& dw_;
  std::vector<Complex> poles_;
  std::vector<Complex> g_;
};

inline double distance_to_piece(const PathPiece& p, Complex z) {
  if (p.arc) {
    double lo = std::min(p.theta0, p.theta1), hi = std::max(p.theta0, p.theta1);
    double best = std::min(std::abs(z - p.start()), std::abs(z - p.end()));
    Complex d = z - p.center;
    if (std::abs(d) > 0) {
      double phi = std::arg(d);
      for (int k = -4; k <= 4; ++k) {
        double t = phi + 2 * M_PI * k;
        if (t >= lo && t <= hi) best = std::min(best, std::abs(std::abs(d) - p.radius));
      }
    } else {
      best = p.radius;
    }
    return best;
  }
  Complex ab = p.b - p.a;
  double t = std::clamp(std::real((z - p.a) * std::conj(ab)) / std::norm(ab), 0.0, 1.0);
  return std::abs(z - (p.a + t * ab));
}

// exp(c P_a) in the dense pole alphabet.
inline CSeries letter_exp(const AlphabetPtr& al, int W, int a, Complex c) {
  return nc_exp(c * CSeries::letter(al, W, a));
}

}  // namespace detail

// Parallel transport of d - sum_a X_a dz/(z - p_a) along the path: dG = Omega G, G(start) = 1.
// Tangential ends are regularized as eps^{-X_end} G_eps eps^{X_start} and extrapolated in eps.
inline MonodromyResult kz_monodromy(const KZForm& form, const TransportPath& path, int W,
                                    const MonodromyOptions& opt = {}) {
  if (W < 1) throw input_error("weight cutoff must be at least 1");
  if (path.pieces.empty()) throw input_error("empty path");
  std::vector<Complex> poles;
  std::vector<RSeries> residues;
  for (const auto& p : form.poles) {
    if (p.x.is_infinity()) continue;
    poles.push_back(Complex(p.x.affine().get_d(), 0.0));
    residues.push_back(p.residue);
  }
  if (poles.empty()) throw domain_error("form has no finite poles");
  const int m = static_cast<int>(poles.size());

  auto pole_at = [&](Complex z) {
    for (int a = 0; a < m; ++a)
      if (std::abs(z - poles[a]) < 1e-12 * std::max(1.0, std::abs(z))) return a;
    return -1;
  };
  int start_pole = -1, end_pole = -1;
  const auto& first = path.pieces.front();
  const auto& last = path.pieces.back();
  if (path.tangential_start) {
    if (first.arc) throw input_error("tangential start needs a line segment");
    start_pole = pole_at(first.a);
    if (start_pole < 0) throw input_error("tangential start is not at a finite pole");
  }
  if (path.tangential_end) {
    if (last.arc) throw input_error("tangential end needs a line segment");
    end_pole = pole_at(last.b);
    if (end_pole < 0) throw input_error("tangential end is not at a finite pole");
  }
  for (std::size_t i = 0; i + 1 < path.pieces.size(); ++i)
    if (std::abs(path.pieces[i].end() - path.pieces[i + 1].start()) > 1e-12)
      throw input_error("path pieces are not contiguous");
  for (std::size_t i = 0; i < path.pieces.size(); ++i) {
    const auto& piece = path.pieces[i];
    if (!piece.arc && std::abs(piece.b - piece.a) == 0.0) throw input_error("degenerate path segment");
    for (int a = 0; a < m; ++a) {
      bool own_end = (i == 0 && a == start_pole) || (i + 1 == path.pieces.size() && a == end_pole);
      if (own_end) continue;
      if (detail::distance_to_piece(piece, poles[a]) < opt.guard)
        throw domain_error("path passes within the guard distance of a pole");
    }
  }

  detail::DenseWords dw(m, W);
  std::vector<std::string> names;
  for (int a = 0; a < m; ++a) names.push_back("P" + std::to_string(a));
  auto pal = make_alphabet(names);

  auto transport = [&](double eps) {
    detail::DenseTransport T(dw, poles);
    for (std::size_t i = 0; i < path.pieces.size(); ++i) {
      const auto& p = path.pieces[i];
      if (p.arc) {
        double len = std::abs(p.theta1 - p.theta0) * std::max(p.radius, 1.0);
        int n = std::max(opt.min_steps, static_cast<int>(std::ceil(opt.min_steps * len)));
        T.integrate(
            [&](double t) {
              Complex e = std::polar(1.0, t);
              return detail::PathPoint{p.center, p.radius * e, Complex(0, 1) * p.radius * e};
            },
            p.theta0, p.theta1, n);
        continue;
      }
      bool ts = i == 0 && start_pole >= 0, te = i + 1 == path.pieces.size() && end_pole >= 0;
      Complex a = p.a, b = p.b, mid = (a + b) / 2.0;
      double half = std::abs(b - a) / 2;
      auto line = [&](Complex from, Complex to, int n) {
        T.integrate([&](double t) { return detail::PathPoint{from, t * (to - from), to - from}; }, 0.0, 1.0, n);
      };
      // z = pole + (unit tangent) e^s on the log scale
      auto log_leg = [&](Complex pole, Complex other, bool outward) {
        Complex dir = (other - pole) / std::abs(other - pole);
        double s_lo = std::log(eps), s_hi = std::log(half);
        int n = std::max(10, static_cast<int>(std::ceil((s_hi - s_lo) / opt.step)));
        auto param = [&](double s) { return detail::PathPoint{pole, dir * std::exp(s), dir * std::exp(s)}; };
        if (outward) {
          T.integrate(param, s_lo, s_hi, n);
        } else {
          T.integrate([&](double s) {
            auto q = param(s_hi + s_lo - s);
            q.dz = -q.dz;
            return q;
          }, s_lo, s_hi, n);
        }
      };
      int n_line = std::max(opt.min_steps, static_cast<int>(std::ceil(opt.min_steps * half)));
      if (ts) log_leg(a, b, true); else line(a, mid, n_line);
      if (te) log_leg(b, a, false); else line(mid, b, n_line);
    }
    CSeries g(pal, W);
    for (std::size_t j = 0; j < dw.words.size(); ++j) g.add_term(dw.words[j], T.value()[j]);
    if (start_pole >= 0) g = g * detail::letter_exp(pal, W, start_pole, std::log(eps));
    if (end_pole >= 0) g = detail::letter_exp(pal, W, end_pole, -std::log(eps)) * g;
    return g;
  };

  CSeries result;
  double residual = 0.0;
  if (start_pole < 0 && end_pole < 0) {
    result = transport(opt.epsilon);
  } else {
    auto f1 = transport(opt.epsilon), f2 = transport(opt.epsilon / 2), f4 = transport(opt.epsilon / 4);
    // cancels eps and eps^2; eps log^k eps terms leave an O(eps) remainder
    result = Complex(8.0 / 3) * f4 - Complex(2.0) * f2 + Complex(1.0 / 3) * f1;
    auto diff = result - f4;
    for (const auto& [w, c] : diff.terms()) residual = std::max(residual, std::abs(c));
    if (!(residual <= opt.tolerance))
      throw domain_error("tangential extrapolation did not converge (residual " + std::to_string(residual) + ")");
  }
  std::vector<CSeries> images;
  for (const auto& r : residues) images.push_back(to_complex(r).truncated(W));
  auto value = result.substitute(images);
  return {value, residual};
}

// ---- limit periods over trivalent graphs ----

struct PathLeg {
  std::string vertex;
  std::string entry;
  std::string exit;
};

// Legs joined at nodes: the exit of one leg is the reverse of the next entry.
// half_turns[k] in {-1, 0, 1} is the rotation at the node after leg k.
struct CombinatorialPath {
  std::string base_tail;
  std::vector<PathLeg> legs;
  std::vector<int> half_turns;

  CombinatorialPath reversed() const {
    CombinatorialPath r{legs.back().exit, {}, {}};
    for (auto it = legs.rbegin(); it != legs.rend(); ++it) r.legs.push_back({it->vertex, it->exit, it->entry});
    r.half_turns.assign(half_turns.rbegin(), half_turns.rend());
    return r;
  }
};

struct LimitPeriod {
  AlphabetPtr residue_alphabet;  // one letter per branch class used by the path
  CSeries abstract;              // in the residue letters
  CSeries value;                 // residues substituted
  double residual = 0.0;
};

inline std::string reverse_label(const std::string& h) { return h.rfind('-', 0) == 0 ? h.substr(1) : "-" + h; }

// Standard three-point transport from the tangential point at 0 to the one at 1 (poles 0, 1, inf),
// in letters P0, P1.
inline MonodromyResult kz_three_point_transport(int W, const MonodromyOptions& opt = {}) {
  auto al = make_alphabet({"P0", "P1"});
  KZForm f{"std",
           {{"0", ProjectivePoint<Rational>::finite(0), RSeries::letter(al, W, 0)},
            {"1", ProjectivePoint<Rational>::finite(1), RSeries::letter(al, W, 1)},
            {"inf", ProjectivePoint<Rational>::infinity(), -(RSeries::letter(al, W, 0) + RSeries::letter(al, W, 1))}}};
  return kz_monodromy(f, TransportPath::polyline({Complex(0), Complex(1)}, true, true), W, opt);
}

inline LimitPeriod limit_unipotent_period(const ResidueAssignment& a, const CombinatorialPath& path, int W,
                                          const MonodromyOptions& opt = {}) {
  const auto& g = a.graph;
  require_valid(g);
  for (const auto& v : g.vertices)
    if (branches_at(g, v).size() != 3) throw domain_error("graph is not trivalent at " + v);
  if (path.legs.empty()) throw input_error("path has no legs");
  if (path.half_turns.size() + 1 != path.legs.size()) throw input_error("need one half-turn marker per node crossing");
  if (tail_index(g, path.base_tail) < 0 || path.legs.front().entry != path.base_tail)
    throw input_error("path must start at the base tail " + path.base_tail);
  for (int s : path.half_turns)
    if (s < -1 || s > 1) throw input_error("half-turn markers must be -1, 0 or 1");
  for (std::size_t k = 0; k < path.legs.size(); ++k) {
    const auto& leg = path.legs[k];
    require_vertex(g, leg.vertex);
    if (leg.entry == leg.exit) throw input_error("leg on " + leg.vertex + " enters and exits at the same branch");
    for (const auto& h : {leg.entry, leg.exit})
      if (terminal_vertex(g, parse_branch(g, h)) != leg.vertex)
        throw input_error("branch " + h + " is not at " + leg.vertex);
    if (k + 1 < path.legs.size()) {
      if (parse_branch(g, leg.exit).kind != Branch::Kind::edge)
        throw input_error("leg exits through a tail before the end of the path");
      if (path.legs[k + 1].entry != reverse_label(leg.exit))
        throw input_error("legs " + std::to_string(k) + " and " + std::to_string(k + 1) + " do not meet at a node");
    }
  }

  // letters: non-elliptic edges share one letter between orientations
  std::vector<std::string> letters;
  std::map<std::string, std::pair<std::string, int>> letter_of;
  auto register_label = [&](const std::string& h) {
    Branch b = parse_branch(g, h);
    std::string key = h;
    int sign = 1;
    if (b.kind == Branch::Kind::edge && !a.elliptic.count(g.edges[b.index].id)) {
      key = g.edges[b.index].id;
      sign = b.sign;
    }
    if (std::find(letters.begin(), letters.end(), "Y_" + key) == letters.end()) letters.push_back("Y_" + key);
    letter_of[h] = {"Y_" + key, sign};
  };
  for (const auto& leg : path.legs) {
    register_label(leg.entry);
    register_label(leg.exit);
  }
  auto ral = make_alphabet(letters);
  auto Y = [&](const std::string& h) {
    const auto& [name, sign] = letter_of.at(h);
    return Complex(sign) * CSeries::letter(ral, W, name);
  };

  auto phi = kz_three_point_transport(W, opt);
  auto legs = parallel_map<CSeries>(path.legs.size(), [&](std::size_t k) {
    return phi.value.substitute({Y(path.legs[k].entry), Y(path.legs[k].exit)});
  });
  CSeries total = legs.front();
  for (std::size_t k = 1; k < legs.size(); ++k) {
    const auto& h = path.legs[k - 1].exit;
    int s = path.half_turns[k - 1];
    if (s != 0) total = nc_exp(Complex(0, M_PI * s) * Y(h)) * total;
    total = legs[k] * total;
  }

  std::vector<CSeries> images;
  for (const auto& name : letters) {
    std::string key = name.substr(2);
    images.push_back(to_complex(a.at(key)).truncated(W));
  }
  auto value = total.substitute(images);
  return {ral, total, value, phi.residual};
}

struct RationalDetection {
  bool rational = false;
  long num = 0, den = 1;
  double error = 0.0;
};

// Continued-fraction search for p/q with q <= max_den within tol.
inline RationalDetection detect_rational(double x, long max_den = 24, double tol = 1e-7) {
  RationalDetection best;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    long p2 = static_cast<long>(a) * p1 + p0, q2 = static_cast<long>(a) * q1 + q0;
    if (q2 > max_den) break;
    double err = std::abs(x - static_cast<double>(p2) / q2);
    if (err <= tol) return {true, p2, q2, err};
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    if (r - a < 1e-15) break;
    r = 1.0 / (r - a);
  }
  best.error = q1 ? std::abs(x - static_cast<double>(p1) / q1) : std::abs(x);
  best.num = p1;
  best.den = q1 ? q1 : 1;
  return best;
}

}  // namespace sforge
