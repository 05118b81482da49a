#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "sforge/graph.hpp"
#include "sforge/moebius.hpp"
#include "sforge/params.hpp"
#include "sforge/words.hpp"

namespace sforge {

struct GroupOptions {
  double loxodromy_margin = default_loxodromy_margin;
  double circle_margin = 0.05;  // relative gap required between isometric circles
  bool check_schottky = true;
  bool reject_infinity_at_base = true;
};

struct Circle {
  Complex center;
  double radius;
};

// Isometric circle |c z + d| = |det|^{1/2}.
inline Circle isometric_circle(const Moebius<Complex>& m) {
  if (m.c == Complex(0.0)) throw domain_error("map fixes infinity; isometric circle undefined");
  return {-m.d / m.c, std::sqrt(std::abs(m.det())) / std::abs(m.c)};
}

template <class T>
class SchottkyGroup {
 public:
  SchottkyGroup(const StableGraph& graph, GroupParams<T> params, const std::string& base, int L,
                const GroupOptions& opt = {})
      : graph_(graph), params_(std::move(params)), base_(base), L_(L), opt_(opt) {
    require_valid(graph_);
    require_vertex(graph_, base_);
    if (L_ < 0) throw input_error("word length cutoff must be non-negative");
    for (const auto& label : opt_.reject_infinity_at_base ? graph_.infinity : std::vector<std::string>{}) {
      Branch b = parse_branch(graph_, label);
      if (b.kind == Branch::Kind::edge && terminal_vertex(graph_, b) == base_)
        throw domain_error("base vertex " + base_ + " carries the infinity branch " + label);
    }
    check_distinct_points();
    for (std::size_t i = 0; i < graph_.edges.size(); ++i) {
      const auto& e = graph_.edges[i];
      const auto& y = params_.y.at(e.id);
      if (!ring_traits<T>::exact && !ring_traits<T>::is_unit(y)) throw domain_error("multiplier y_" + e.id + " is zero");
      atom_pos_.push_back(phi_edge(params_.x.at(e.id), params_.x.at("-" + e.id), y));
      atom_neg_.push_back(phi_edge(params_.x.at("-" + e.id), params_.x.at(e.id), y));
    }
    gens_ = fundamental_group_generators(graph_, base_);
    cache_ = std::make_shared<Cache>();
    for (const auto& p : gens_.paths) {
      auto m = map_of_path(p);
      if constexpr (std::is_same_v<T, Complex>) {
        // scale to unit determinant
        Complex s = std::sqrt(m.det());
        m = {m.a / s, m.b / s, m.c / s, m.d / s};
      }
      gen_maps_.push_back(m);
    }
    for (int i = 1; i <= genus(); ++i) gen_fp_.push_back(fixed_points_of(Word{i}));
    if constexpr (std::is_same_v<T, Complex>)
      if (opt_.check_schottky) check_schottky_condition();
  }

  const StableGraph& graph() const { return graph_; }
  const GroupParams<T>& params() const { return params_; }
  const std::string& base() const { return base_; }
  const Generators& generators() const { return gens_; }
  const GroupOptions& options() const { return opt_; }
  int genus() const { return static_cast<int>(gens_.paths.size()); }
  int L() const { return L_; }
  const T& like() const { return params_.like; }

  const ProjectivePoint<T>& x(const std::string& label) const {
    auto it = params_.x.find(label);
    if (it == params_.x.end()) throw input_error("no branch point for " + label);
    return it->second;
  }
  const ProjectivePoint<T>& x(const Branch& b) const { return x(branch_label(graph_, b)); }

  const Moebius<T>& atom(int code) const {
    int i = code_index(code);
    return code > 0 ? atom_pos_.at(i) : atom_neg_.at(i);
  }

  // gamma_k for k = +-1..+-g (inverse by adjugate).
  Moebius<T> generator(int k) const {
    check_generator_index(genus(), k < 0 ? -k : k);
    const auto& m = gen_maps_[(k < 0 ? -k : k) - 1];
    return k > 0 ? m : m.inverse();
  }

  // alpha_k for k = +-1..+-g.
  const ProjectivePoint<T>& alpha(int k) const {
    const auto& fp = gen_fp_.at((k < 0 ? -k : k) - 1);
    return k > 0 ? fp.attractive : fp.repulsive;
  }
  const T& beta(int i) const { return gen_fp_.at(i - 1).multiplier; }
  const FixedPoints<T>& generator_fixed_points(int i) const { return gen_fp_.at(i - 1); }

  // Edge path of a word: gamma_{w_0}...gamma_{w_m} = (rho_{w_m} ... rho_{w_0})^*.
  EdgePath path_of(const Word& w) const {
    EdgePath p;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      int k = *it;
      const auto& r = gens_.paths.at((k < 0 ? -k : k) - 1);
      if (k > 0)
        p.insert(p.end(), r.begin(), r.end());
      else {
        auto inv = inverse_path(r);
        p.insert(p.end(), inv.begin(), inv.end());
      }
    }
    return reduce_path(p);
  }

  // phi_{h(l)} ... phi_{h(1)} for a reduced path, memoized by suffix.
  Moebius<T> map_of_path(const EdgePath& p) const {
    if (p.empty()) return Moebius<T>::identity(like());
    std::lock_guard<std::recursive_mutex> lock(cache_->mutex);
    return map_of_path_locked(p);
  }

  Moebius<T> element(const Word& w) const {
    if constexpr (std::is_same_v<T, Complex>) {
      Moebius<Complex> m = Moebius<Complex>::identity();
      for (int k : w) m = m * generator(k);
      return m;
    } else {
      return map_of_path(path_of(w));
    }
  }

  // Maps for a batch of words; prefix-shared over C, path-memoized otherwise.
  std::vector<Moebius<T>> elements(const std::vector<Word>& words) const {
    std::vector<Moebius<T>> out;
    out.reserve(words.size());
    if constexpr (std::is_same_v<T, Complex>) {
      std::map<Word, Moebius<Complex>> memo;
      memo[{}] = Moebius<Complex>::identity();
      std::function<const Moebius<Complex>&(const Word&)> get = [&](const Word& w) -> const Moebius<Complex>& {
        auto it = memo.find(w);
        if (it != memo.end()) return it->second;
        Word head(w.begin(), w.end() - 1);
        Moebius<Complex> m = get(head) * generator(w.back());
        return memo.emplace(w, m).first->second;
      };
      for (const auto& w : words) out.push_back(get(w));
    } else {
      for (const auto& w : words) out.push_back(element(w));
    }
    return out;
  }

  // Fixed points and multiplier of a nontrivial word.
  FixedPoints<T> fixed_points_of(const Word& w) const {
    Word r = reduce_word(w);
    if (r.empty()) throw domain_error("identity has no fixed points");
    if constexpr (std::is_same_v<T, TruncatedSeries>) {
      return fixed_points_of_path(path_of(r));
    } else if constexpr (std::is_same_v<T, Complex>) {
      // generators have unit determinant
      const Complex one(1.0);
      std::size_t k = 0;
      while (2 * k + 2 <= r.size() && r[k] == -r[r.size() - 1 - k]) ++k;
      if (k == 0) return detail::fixed_points_complex(element(r), opt_.loxodromy_margin, one);
      // r = u c u^-1
      Word u(r.begin(), r.begin() + k), c(r.begin() + k, r.end() - k);
      auto fp = detail::fixed_points_complex(element(c), opt_.loxodromy_margin, one);
      auto m = element(u);
      return {normalized(m.apply(fp.attractive)), normalized(m.apply(fp.repulsive)), fp.multiplier};
    } else {
      return fixed_points(element(r), opt_.loxodromy_margin);
    }
  }

  // Same for a closed edge path at the base.
  FixedPoints<T> fixed_points_of_path(EdgePath p) const {
    p = reduce_path(p);
    if (p.empty()) throw domain_error("identity has no fixed points");
    if constexpr (std::is_same_v<T, TruncatedSeries>) {
      EdgePath q;
      while (p.size() >= 2 && p.front() == -p.back()) {
        q.push_back(p.front());
        p.erase(p.begin());
        p.pop_back();
      }
      // path = q . core . q^{-1}; its map is map(q^{-1}) map(core) map(q)
      auto fp = fixed_points(map_of_path(p), opt_.loxodromy_margin);
      auto conj = map_of_path(inverse_path(q));
      return {normalized(conj.apply(fp.attractive)), normalized(conj.apply(fp.repulsive)), fp.multiplier};
    } else {
      return fixed_points(map_of_path(p), opt_.loxodromy_margin);
    }
  }

  // gamma(alpha_k) for a word gamma, as a projective point.
  ProjectivePoint<T> image_of_alpha(const Word& w, int k) const {
    if (w.empty()) return alpha(k);
    if constexpr (std::is_same_v<T, Complex>) {
      return normalized(element(w).apply(alpha(k)));
    } else {
      Word c = reduce_word(concat(concat(w, Word{k > 0 ? k : -k}), inverse_word(w)));
      auto fp = fixed_points_of(c);
      return k > 0 ? fp.attractive : fp.repulsive;
    }
  }

  // Path from v to the base inside the spanning tree; its map sends the P_v chart to the base chart.
  EdgePath path_to_base(const std::string& v) const {
    require_vertex(graph_, v);
    return tree_path(graph_, maximal_subtree(graph_), v, base_);
  }

 private:
  struct Cache {
    std::recursive_mutex mutex;
    std::map<EdgePath, Moebius<T>> maps;
  };

  Moebius<T> map_of_path_locked(const EdgePath& p) const {
    if (p.empty()) return Moebius<T>::identity(like());
    if (p.size() == 1) return atom(p[0]);
    auto it = cache_->maps.find(p);
    if (it != cache_->maps.end()) return it->second;
    EdgePath tail(p.begin() + 1, p.end());
    Moebius<T> m = map_of_path_locked(tail) * atom(p[0]);
    cache_->maps.emplace(p, m);
    return m;
  }

  void check_distinct_points() const {
    for (const auto& v : graph_.vertices) {
      auto br = branches_at(graph_, v);
      for (std::size_t i = 0; i < br.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
          const auto& a = x(br[i]);
          const auto& b = x(br[j]);
          bool ok;
          if constexpr (std::is_same_v<T, Complex>)
            ok = !same_point(a, b, 1e-14);
          else
            ok = ring_traits<T>::is_unit(det2(a, b));
          if (!ok)
            throw domain_error("coincident branch points " + branch_label(graph_, br[i]) + " and " +
                               branch_label(graph_, br[j]) + " at vertex " + v);
        }
    }
  }

  void check_schottky_condition() const {
    if constexpr (std::is_same_v<T, Complex>) {
      std::vector<Circle> circles;
      for (int i = 1; i <= genus(); ++i) {
        for (int s : {1, -1}) {
          auto m = generator(s * i);
          if (m.c == Complex(0.0)) {
            if (genus() == 1) return;
            throw domain_error("generator fixes infinity; isometric circles undefined (move the branch points)");
          }
          circles.push_back(isometric_circle(m));
        }
      }
      for (std::size_t a = 0; a < circles.size(); ++a)
        for (std::size_t b = 0; b < a; ++b) {
          double gap = std::abs(circles[a].center - circles[b].center);
          if (gap <= (1.0 + opt_.circle_margin) * (circles[a].radius + circles[b].radius))
            throw domain_error("isometric circles overlap (decrease |y| or respace x)");
        }
    }
  }

  StableGraph graph_;
  GroupParams<T> params_;
  std::string base_;
  int L_;
  GroupOptions opt_;
  std::vector<Moebius<T>> atom_pos_, atom_neg_;
  Generators gens_;
  std::vector<Moebius<T>> gen_maps_;
  std::vector<FixedPoints<T>> gen_fp_;
  std::shared_ptr<Cache> cache_;
};

template <class T>
SchottkyGroup<T> build_group(const StableGraph& graph, const GroupParams<T>& params, const std::string& base, int L,
                             const GroupOptions& opt = {}) {
  return SchottkyGroup<T>(graph, params, base, L, opt);
}

}  // namespace sforge
