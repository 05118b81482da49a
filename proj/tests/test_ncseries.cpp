#include <gtest/gtest.h>

#include <random>

#include "sforge/ncseries.hpp"
#include "sforge/series.hpp"

using namespace sforge;

namespace {

using NC = NCSeries<Rational>;

// Coproduct by splitting each word into complementary subsequences.
std::map<std::pair<NCWord, NCWord>, Rational> coproduct(const NC& f) {
  std::map<std::pair<NCWord, NCWord>, Rational> out;
  for (const auto& [w, c] : f.terms()) {
    std::size_t n = w.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      NCWord l, r;
      for (std::size_t i = 0; i < n; ++i) (mask >> i & 1 ? l : r).push_back(w[i]);
      out[{l, r}] += c;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

std::map<std::pair<NCWord, NCWord>, Rational> tensor_square(const NC& f) {
  std::map<std::pair<NCWord, NCWord>, Rational> out;
  for (const auto& [u, a] : f.terms())
    for (const auto& [v, b] : f.terms())
      if (static_cast<int>(u.size() + v.size()) <= f.weight()) out[{u, v}] += a * b;
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

NC random_lie(std::mt19937& rng, const AlphabetPtr& al, int W) {
  NC r(al, W);
  for (int i = 0; i < al->size(); ++i) r += frac(static_cast<int>(rng() % 7) - 3, 1 + rng() % 3) * NC::letter(al, W, i);
  NC x = NC::letter(al, W, 0), y = NC::letter(al, W, 1 % al->size());
  r += Rational(static_cast<int>(rng() % 5) - 2) * bracket(x, y);
  r += frac(static_cast<int>(rng() % 5) - 2, 3) * bracket(x, bracket(x, y));
  return r;
}

}  // namespace

TEST(Bernoulli, AgreesWithSeriesInversion) {
  const int W = 10;
  auto b = bernoulli_expansion(W);
  // (e^T - 1)/T = sum T^k/(k+1)!, inverted in a one-variable truncated ring.
  auto sp = make_space({"T"}, W);
  TruncatedSeries s(sp);
  mpz_class f = 1;
  for (int k = 0; k <= W; ++k) {
    f *= k + 1;
    std::vector<int> e{k};
    s.set_coefficient(pack_monomial(e), Rational(1) / Rational(f));
  }
  auto inv = s.inverse();
  for (int k = 0; k <= W; ++k) EXPECT_EQ(b[k], inv.coefficient(std::vector<int>{k})) << k;
  EXPECT_EQ(b[0], Rational(1));
  EXPECT_EQ(b[1], Rational(-1, 2));
  EXPECT_EQ(b[2], Rational(1, 12));
  EXPECT_EQ(b[3], Rational(0));
}

TEST(Bernoulli, ReflectionIdentity) {
  auto b = bernoulli_expansion(9);
  // T/(e^T-1) + T/(e^{-T}-1) = -T
  for (int k = 0; k <= 9; ++k) {
    Rational s = b[k] - (k % 2 ? -b[k] : b[k]);
    EXPECT_EQ(s, k == 1 ? Rational(-1) : Rational(0));
  }
}

TEST(NCSeries, AdSeriesExamples) {
  auto al = make_alphabet({"T", "A"});
  const int W = 4;
  auto T = NC::letter(al, W, 0), A = NC::letter(al, W, 1);
  EXPECT_EQ(nc_ad_series({{1}}, al, "T", "A", W), A);
  EXPECT_EQ(nc_ad_series({{0}, {1}}, al, "T", "A", W), T * A - A * T);
  auto sq = nc_ad_series({{0}, {0}, {Rational(1, 12)}}, al, "T", "A", W);
  EXPECT_EQ(sq, Rational(1, 12) * (T * T * A - Rational(2) * (T * A * T) + A * T * T));
  EXPECT_TRUE(nc_ad_series({{0, 5}}, al, "T", "A", W).is_zero());
}

TEST(NCSeries, GrouplikeExamples) {
  auto al = make_alphabet({"X", "Y"});
  const int W = 4;
  auto X = NC::letter(al, W, 0), Y = NC::letter(al, W, 1);
  EXPECT_TRUE(nc_grouplike_test(nc_exp(X)));
  EXPECT_TRUE(nc_grouplike_test(NC::one(al, W)));
  EXPECT_FALSE(nc_grouplike_test(NC::one(al, W) + X * Y));
  auto rep = nc_grouplike_report(Rational(2) * NC::one(al, W));
  EXPECT_FALSE(rep.grouplike);
  EXPECT_EQ(rep.diagnostic, "constant term is not 1");
}

TEST(NCSeriesProperty, ProductAssociativeAndGraded) {
  std::mt19937 rng(17);
  auto al = make_alphabet({"a", "b", "c"});
  const int W = 4;
  for (int trial = 0; trial < 20; ++trial) {
    auto x = NC::one(al, W) + random_lie(rng, al, W);
    auto y = random_lie(rng, al, W);
    auto z = random_lie(rng, al, W) + random_lie(rng, al, W) * random_lie(rng, al, W);
    EXPECT_EQ((x * y) * z, x * (y * z));
    for (int k = 0; k <= W; ++k) {
      NC lhs = (y * z).homogeneous(k), rhs(al, W);
      for (int i = 0; i <= k; ++i) rhs += y.homogeneous(i) * z.homogeneous(k - i);
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(NCSeriesProperty, ExpLogInverse) {
  std::mt19937 rng(23);
  auto al = make_alphabet({"a", "b"});
  const int W = 5;
  for (int trial = 0; trial < 15; ++trial) {
    auto x = random_lie(rng, al, W) + random_lie(rng, al, W) * random_lie(rng, al, W);
    EXPECT_EQ(nc_log(nc_exp(x)), x);
    auto g = NC::one(al, W) + x;
    EXPECT_EQ(nc_exp(nc_log(g)), g);
    EXPECT_EQ(g * nc_inverse(g), NC::one(al, W));
  }
}

TEST(NCSeriesProperty, GrouplikeMatchesCoproductOracle) {
  std::mt19937 rng(29);
  auto al = make_alphabet({"a", "b"});
  const int W = 4;
  for (int trial = 0; trial < 15; ++trial) {
    auto lie = random_lie(rng, al, W);
    auto g = nc_exp(lie);
    EXPECT_EQ(coproduct(g).size() > 0, true);
    EXPECT_TRUE(coproduct(g) == tensor_square(g));
    EXPECT_TRUE(nc_grouplike_test(g));
    auto bad = g + Rational(1, 3) * NC::letter(al, W, 0) * NC::letter(al, W, 1);
    EXPECT_FALSE(coproduct(bad) == tensor_square(bad));
    EXPECT_FALSE(nc_grouplike_test(bad));
  }
}

TEST(NCSeries, SubstitutionIsMultiplicative) {
  auto al = make_alphabet({"a", "b"});
  auto bl = make_alphabet({"x", "y", "z"});
  const int W = 4;
  auto x = NC::letter(bl, W, 0), y = NC::letter(bl, W, 1), z = NC::letter(bl, W, 2);
  std::vector<NC> images{x + y, bracket(y, z)};
  auto a = NC::letter(al, W, 0), b = NC::letter(al, W, 1);
  auto f = a * b + Rational(3) * b * a * a, g = NC::one(al, W) + a;
  EXPECT_EQ((f * g).substitute(images), f.substitute(images) * g.substitute(images));
}
