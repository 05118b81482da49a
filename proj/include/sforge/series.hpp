#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sforge/error.hpp"
#include "sforge/rational.hpp"

namespace sforge {

// Variables and total-degree cutoff shared by a family of truncated series.
class SeriesSpace {
 public:
  static constexpr int max_vars = 16;
  static constexpr int max_cutoff = 15;

  SeriesSpace(std::vector<std::string> vars, int cutoff) : vars_(std::move(vars)), cutoff_(cutoff) {
    if (vars_.size() > static_cast<std::size_t>(max_vars))
      throw input_error("too many series variables (max 16)");
    if (cutoff_ < 0 || cutoff_ > max_cutoff) throw input_error("series cutoff must be in [0, 15]");
  }

  const std::vector<std::string>& vars() const { return vars_; }
  int nvars() const { return static_cast<int>(vars_.size()); }
  int cutoff() const { return cutoff_; }

  int index_of(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) throw input_error("unknown series variable: " + name);
    return static_cast<int>(it - vars_.begin());
  }

  bool same_as(const SeriesSpace& o) const { return vars_ == o.vars_ && cutoff_ == o.cutoff_; }

 private:
  std::vector<std::string> vars_;
  int cutoff_;
};

using SpacePtr = std::shared_ptr<const SeriesSpace>;

inline SpacePtr make_space(std::vector<std::string> vars, int cutoff) {
  return std::make_shared<const SeriesSpace>(std::move(vars), cutoff);
}

// Exponent vectors packed four bits per variable.
using Monomial = std::uint64_t;

inline int monomial_degree(Monomial m) {
  int d = 0;
  for (; m; m >>= 4) d += static_cast<int>(m & 0xF);
  return d;
}

inline int monomial_exponent(Monomial m, int var) { return static_cast<int>((m >> (4 * var)) & 0xF); }

inline Monomial pack_monomial(const std::vector<int>& exps) {
  Monomial m = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0 || exps[i] > 15) throw input_error("series exponent out of range");
    m |= static_cast<Monomial>(exps[i]) << (4 * i);
  }
  return m;
}

inline std::vector<int> unpack_monomial(Monomial m, int nvars) {
  std::vector<int> e(nvars);
  for (int i = 0; i < nvars; ++i) e[i] = monomial_exponent(m, i);
  return e;
}

// Element of Q[[y_1..y_k]] / (total degree > D). A null space denotes a bare constant.
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  explicit TruncatedSeries(SpacePtr space) : space_(std::move(space)) {}
  TruncatedSeries(SpacePtr space, const Rational& c) : space_(std::move(space)) {
    if (c != 0) terms_[0] = c;
  }
  TruncatedSeries(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_[0] = c;
  }
  TruncatedSeries(long c) : TruncatedSeries(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  TruncatedSeries(int c) : TruncatedSeries(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static TruncatedSeries variable(const SpacePtr& space, int index) {
    if (index < 0 || index >= space->nvars()) throw input_error("series variable index out of range");
    TruncatedSeries s(space);
    if (space->cutoff() >= 1) s.terms_[Monomial{1} << (4 * index)] = 1;
    return s;
  }
  static TruncatedSeries variable(const SpacePtr& space, const std::string& name) {
    return variable(space, space->index_of(name));
  }

  const SpacePtr& space() const { return space_; }
  int cutoff() const { return space_ ? space_->cutoff() : 0; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  void set_coefficient(Monomial m, const Rational& c) {
    if (space_ && monomial_degree(m) > space_->cutoff()) return;
    if (c == 0)
      terms_.erase(m);
    else
      terms_[m] = c;
  }

  Rational coefficient(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational coefficient(const std::vector<int>& exps) const { return coefficient(pack_monomial(exps)); }
  Rational constant_term() const { return coefficient(Monomial{0}); }

  bool is_zero() const { return terms_.empty(); }
  bool is_unit() const { return constant_term() != 0; }

  // Lowest total degree with a nonzero coefficient; INT_MAX for zero.
  int order() const {
    int o = INT_MAX;
    for (const auto& [m, c] : terms_) o = std::min(o, monomial_degree(m));
    return o;
  }

  TruncatedSeries operator-() const {
    TruncatedSeries r(space_);
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    adopt(o);
    for (const auto& [m, c] : o.terms_) accumulate(m, c);
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    adopt(o);
    for (const auto& [m, c] : o.terms_) accumulate(m, -c);
    return *this;
  }
  TruncatedSeries& operator*=(const TruncatedSeries& o) {
    *this = *this * o;
    return *this;
  }
  TruncatedSeries& operator/=(const TruncatedSeries& o) {
    *this = *this * o.inverse();
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a * b.inverse();
  }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r(common_space(a, b));
    if (a.terms_.empty() || b.terms_.empty()) return r;
    const int D = r.space_ ? r.space_->cutoff() : 0;
    auto by_degree = [](const TruncatedSeries& s) {
      std::vector<std::pair<int, std::pair<Monomial, const Rational*>>> v;
      v.reserve(s.terms_.size());
      for (const auto& [m, c] : s.terms_) v.push_back({monomial_degree(m), {m, &c}});
      std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      return v;
    };
    auto va = by_degree(a);
    auto vb = by_degree(b);
    Rational tmp;
    for (const auto& [da, ta] : va) {
      if (da > D) break;
      for (const auto& [db, tb] : vb) {
        if (da + db > D) break;
        tmp = *ta.second * *tb.second;
        r.accumulate(ta.first + tb.first, tmp);
      }
    }
    return r;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

  TruncatedSeries inverse() const {
    Rational c0 = constant_term();
    if (c0 == 0) throw domain_error("series is not a unit (zero constant term)");
    Rational inv0 = 1 / c0;
    TruncatedSeries u = TruncatedSeries(space_, Rational(1)) - (*this) * TruncatedSeries(space_, inv0);
    TruncatedSeries r(space_, Rational(1));
    for (int k = 0; k < cutoff(); ++k) r = TruncatedSeries(space_, Rational(1)) + u * r;
    return r * TruncatedSeries(space_, inv0);
  }

  // Same coefficients with a lower cutoff.
  TruncatedSeries truncated(int new_cutoff) const {
    if (!space_) return *this;
    if (new_cutoff > space_->cutoff()) throw input_error("cannot raise series cutoff");
    TruncatedSeries r(make_space(space_->vars(), new_cutoff));
    for (const auto& [m, c] : terms_)
      if (monomial_degree(m) <= new_cutoff) r.terms_[m] = c;
    return r;
  }

  // Sets the listed variables to zero.
  TruncatedSeries with_zero(const std::vector<int>& vars) const {
    TruncatedSeries r(space_);
    for (const auto& [m, c] : terms_) {
      bool keep = true;
      for (int v : vars)
        if (monomial_exponent(m, v) != 0) keep = false;
      if (keep) r.terms_[m] = c;
    }
    return r;
  }

 private:
  static SpacePtr common_space(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!a.space_) return b.space_;
    if (!b.space_ || a.space_ == b.space_) return a.space_;
    if (!a.space_->same_as(*b.space_)) throw input_error("series from different spaces");
    return a.space_;
  }

  void adopt(const TruncatedSeries& o) { space_ = common_space(*this, o); }

  void accumulate(Monomial m, const Rational& c) {
    if (c == 0) return;
    if (space_ && monomial_degree(m) > space_->cutoff()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  SpacePtr space_;
  std::map<Monomial, Rational> terms_;
};

}  // namespace sforge
