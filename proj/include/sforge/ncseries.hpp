#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sforge/error.hpp"
#include "sforge/rational.hpp"

namespace sforge {

class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
    for (std::size_t i = 0; i < letters_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (letters_[i] == letters_[j]) throw input_error("duplicate letter: " + letters_[i]);
  }
  const std::vector<std::string>& letters() const { return letters_; }
  int size() const { return static_cast<int>(letters_.size()); }
  const std::string& name(int i) const { return letters_.at(i); }
  int index_of(const std::string& s) const {
    auto it = std::find(letters_.begin(), letters_.end(), s);
    if (it == letters_.end()) throw input_error("unknown letter: " + s);
    return static_cast<int>(it - letters_.begin());
  }

 private:
  std::vector<std::string> letters_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr make_alphabet(std::vector<std::string> letters) {
  return std::make_shared<const Alphabet>(std::move(letters));
}

using NCWord = std::vector<int>;

// Shorter words first, then lexicographic.
struct ShortLex {
  bool operator()(const NCWord& a, const NCWord& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

template <class C>
bool nc_is_zero(const C& c) {
  return c == C(0);
}

// Truncated element of the free associative algebra over C.
template <class C>
class NCSeries {
 public:
  using Terms = std::map<NCWord, C, ShortLex>;

  NCSeries() = default;
  NCSeries(AlphabetPtr alphabet, int weight) : alpha_(std::move(alphabet)), W_(weight) {
    if (W_ < 0) throw input_error("negative weight cutoff");
  }

  static NCSeries constant(AlphabetPtr a, int W, const C& c) {
    NCSeries s(std::move(a), W);
    s.add_term({}, c);
    return s;
  }
  static NCSeries one(AlphabetPtr a, int W) { return constant(std::move(a), W, C(1)); }
  static NCSeries letter(AlphabetPtr a, int W, int i) {
    NCSeries s(std::move(a), W);
    s.add_term({i}, C(1));
    return s;
  }
  static NCSeries letter(const AlphabetPtr& a, int W, const std::string& name) {
    return letter(a, W, a->index_of(name));
  }

  const AlphabetPtr& alphabet() const { return alpha_; }
  int weight() const { return W_; }
  const Terms& terms() const { return terms_; }

  C coefficient(const NCWord& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? C(0) : it->second;
  }
  C coefficient(const std::vector<std::string>& w) const {
    NCWord v;
    for (const auto& s : w) v.push_back(alpha_->index_of(s));
    return coefficient(v);
  }
  C constant_term() const { return coefficient(NCWord{}); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const NCWord& w, const C& c) {
    if (static_cast<int>(w.size()) > W_ || nc_is_zero(c)) return;
    auto [it, fresh] = terms_.try_emplace(w, c);
    if (!fresh) {
      it->second += c;
      if (nc_is_zero(it->second)) terms_.erase(it);
    }
  }

  NCSeries operator-() const {
    NCSeries r(alpha_, W_);
    for (const auto& [w, c] : terms_) r.terms_[w] = -c;
    return r;
  }
  NCSeries& operator+=(const NCSeries& o) {
    check(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  NCSeries& operator-=(const NCSeries& o) {
    check(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  friend NCSeries operator+(NCSeries a, const NCSeries& b) { return a += b; }
  friend NCSeries operator-(NCSeries a, const NCSeries& b) { return a -= b; }

  friend NCSeries operator*(const C& k, const NCSeries& a) {
    NCSeries r(a.alpha_, a.W_);
    if (nc_is_zero(k)) return r;
    for (const auto& [w, c] : a.terms_) r.add_term(w, k * c);
    return r;
  }

  friend NCSeries operator*(const NCSeries& a, const NCSeries& b) {
    a.check(b);
    NCSeries r(a.alpha_, a.W_);
    NCWord w;
    for (const auto& [u, cu] : a.terms_) {
      for (const auto& [v, cv] : b.terms_) {
        if (static_cast<int>(u.size() + v.size()) > a.W_) break;  // ShortLex: longer v follow
        w.assign(u.begin(), u.end());
        w.insert(w.end(), v.begin(), v.end());
        r.add_term(w, cu * cv);
      }
    }
    return r;
  }

  friend bool operator==(const NCSeries& a, const NCSeries& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const NCSeries& a, const NCSeries& b) { return !(a == b); }

  NCSeries truncated(int W) const {
    NCSeries r(alpha_, std::min(W, W_));
    for (const auto& [w, c] : terms_)
      if (static_cast<int>(w.size()) <= r.W_) r.terms_[w] = c;
    return r;
  }

  // Part of exact weight k.
  NCSeries homogeneous(int k) const {
    NCSeries r(alpha_, W_);
    for (const auto& [w, c] : terms_)
      if (static_cast<int>(w.size()) == k) r.terms_[w] = c;
    return r;
  }

  // Algebra map sending letter i to images[i]; images should have no constant term.
  NCSeries substitute(const std::vector<NCSeries>& images) const {
    if (static_cast<int>(images.size()) != alpha_->size()) throw input_error("substitution arity mismatch");
    const NCSeries& ref = images.empty() ? *this : images.front();
    NCSeries r(ref.alpha_, std::min(W_, ref.W_));
    // powers memoized by word prefix
    std::map<NCWord, NCSeries, ShortLex> cache;
    cache.emplace(NCWord{}, one(ref.alpha_, r.W_));
    std::function<const NCSeries&(const NCWord&)> image_of = [&](const NCWord& w) -> const NCSeries& {
      auto it = cache.find(w);
      if (it != cache.end()) return it->second;
      NCWord head(w.begin(), w.end() - 1);
      NCSeries v = image_of(head) * images[w.back()].truncated(r.W_);
      return cache.emplace(w, std::move(v)).first->second;
    };
    for (const auto& [w, c] : terms_) r += c * image_of(w);
    return r;
  }

  template <class F>
  auto map_coefficients(F f) const {
    using D = decltype(f(std::declval<C>()));
    NCSeries<D> r(alpha_, W_);
    for (const auto& [w, c] : terms_) r.add_term(w, f(c));
    return r;
  }

  std::string word_string(const NCWord& w) const {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + alpha_->name(w[i]);
    return s;
  }

 private:
  void check(const NCSeries& o) const {
    if (alpha_ != o.alpha_ && (!alpha_ || !o.alpha_ || alpha_->letters() != o.alpha_->letters()))
      throw input_error("noncommutative series over different alphabets");
    if (W_ != o.W_) throw input_error("noncommutative series with different weight cutoffs");
  }

  AlphabetPtr alpha_;
  int W_ = 0;
  Terms terms_;
};

template <class C>
NCSeries<C> bracket(const NCSeries<C>& a, const NCSeries<C>& b) {
  return a * b - b * a;
}

template <class C>
C factorial_inverse(int k) {
  C f(1);
  for (int i = 2; i <= k; ++i) f = f / C(i);
  return f;
}

template <class C>
NCSeries<C> nc_exp(const NCSeries<C>& f) {
  if (!nc_is_zero(f.constant_term())) throw domain_error("exp needs a series without constant term");
  auto r = NCSeries<C>::one(f.alphabet(), f.weight());
  auto p = r;
  for (int k = 1; k <= f.weight(); ++k) {
    p = p * f;
    r += factorial_inverse<C>(k) * p;
  }
  return r;
}

template <class C>
NCSeries<C> nc_log(const NCSeries<C>& f) {
  if (f.constant_term() != C(1)) throw domain_error("log needs constant term 1");
  auto u = f - NCSeries<C>::one(f.alphabet(), f.weight());
  NCSeries<C> r(f.alphabet(), f.weight());
  auto p = NCSeries<C>::one(f.alphabet(), f.weight());
  for (int k = 1; k <= f.weight(); ++k) {
    p = p * u;
    r += (k % 2 ? C(1) : C(-1)) / C(k) * p;
  }
  return r;
}

// Inverse of a series with invertible constant term.
template <class C>
NCSeries<C> nc_inverse(const NCSeries<C>& f) {
  C c0 = f.constant_term();
  if (nc_is_zero(c0)) throw domain_error("series has no inverse");
  auto one = NCSeries<C>::one(f.alphabet(), f.weight());
  auto u = one - (C(1) / c0) * f;
  auto r = one;
  for (int k = 0; k < f.weight(); ++k) r = one + u * r;
  return (C(1) / c0) * r;
}

// Multiset of words in the shuffle product u ш v.
inline void shuffle_words(const NCWord& u, const NCWord& v, std::map<NCWord, long, ShortLex>& out) {
  NCWord w;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
    if (i == u.size() && j == v.size()) {
      ++out[w];
      return;
    }
    if (i < u.size()) {
      w.push_back(u[i]);
      rec(i + 1, j);
      w.pop_back();
    }
    if (j < v.size()) {
      w.push_back(v[j]);
      rec(i, j + 1);
      w.pop_back();
    }
  };
  rec(0, 0);
}

inline std::vector<NCWord> all_words(int letters, int max_len) {
  std::vector<NCWord> out{{}};
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (static_cast<int>(out[k].size()) == max_len) continue;
    for (int a = 0; a < letters; ++a) {
      NCWord w = out[k];
      w.push_back(a);
      out.push_back(w);
    }
  }
  return out;
}

inline double coefficient_abs(const Rational& q) { return std::abs(q.get_d()); }
inline double coefficient_abs(const std::complex<double>& z) { return std::abs(z); }

struct GrouplikeReport {
  bool grouplike = false;
  double max_defect = 0.0;
  std::string diagnostic;
};

// Letters primitive: f is grouplike iff f_u f_v = <f, u ш v> for all |u|+|v| <= W, and f_1 = 1.
template <class C>
GrouplikeReport nc_grouplike_report(const NCSeries<C>& f, double tol = 0.0) {
  GrouplikeReport rep;
  if (coefficient_abs(f.constant_term() - C(1)) > tol) {
    rep.diagnostic = "constant term is not 1";
    rep.max_defect = coefficient_abs(f.constant_term() - C(1));
    return rep;
  }
  const int W = f.weight();
  auto words = all_words(f.alphabet()->size(), W);
  for (const auto& u : words) {
    if (u.empty()) continue;
    for (const auto& v : words) {
      if (v.empty() || u.size() + v.size() > static_cast<std::size_t>(W)) continue;
      if (ShortLex{}(v, u)) continue;  // symmetric in u, v
      std::map<NCWord, long, ShortLex> sh;
      shuffle_words(u, v, sh);
      C lhs = f.coefficient(u) * f.coefficient(v);
      C rhs(0);
      for (const auto& [w, m] : sh) rhs += C(m) * f.coefficient(w);
      double d = coefficient_abs(lhs - rhs);
      if (d > rep.max_defect) {
        rep.max_defect = d;
        if (d > tol) rep.diagnostic = "coproduct mismatch at (" + f.word_string(u) + ") x (" + f.word_string(v) + ")";
      }
    }
  }
  rep.grouplike = rep.max_defect <= tol;
  return rep;
}

template <class C>
bool nc_grouplike_test(const NCSeries<C>& f, double tol = 0.0) {
  return nc_grouplike_report(f, tol).grouplike;
}

// b_k with T/(e^T - 1) = sum b_k T^k.
inline std::vector<Rational> bernoulli_expansion(int W) {
  if (W < 0) throw input_error("negative order");
  std::vector<Rational> B(W + 1);
  B[0] = 1;
  // sum_{k<=m} C(m+1, k) B_k = 0
  for (int m = 1; m <= W; ++m) {
    Rational s = 0;
    mpz_class binom = 1;  // C(m+1, 0)
    for (int k = 0; k < m; ++k) {
      s += Rational(binom) * B[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    B[m] = -s / Rational(m + 1);
  }
  std::vector<Rational> b(W + 1);
  mpz_class fact = 1;
  for (int k = 0; k <= W; ++k) {
    if (k > 0) fact *= k;
    b[k] = B[k] / Rational(fact);
    b[k].canonicalize();
  }
  return b;
}

// sum f[i][j] ad_T^i ad_A^j (A); f[i][j] is the coefficient of T^i A^j (ad_A applied first).
inline NCSeries<Rational> nc_ad_series(const std::vector<std::vector<Rational>>& f, const AlphabetPtr& alphabet,
                                       const std::string& T, const std::string& A, int W) {
  auto t = NCSeries<Rational>::letter(alphabet, W, T);
  auto a = NCSeries<Rational>::letter(alphabet, W, A);
  NCSeries<Rational> r(alphabet, W);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < f[i].size(); ++j) {
      if (f[i][j] == 0) continue;
      auto x = a;
      for (std::size_t k = 0; k < j; ++k) x = bracket(a, x);
      for (std::size_t k = 0; k < i; ++k) x = bracket(t, x);
      r += f[i][j] * x;
    }
  }
  return r;
}

}  // namespace sforge
