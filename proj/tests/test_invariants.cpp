#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "sforge/invariants.hpp"

using namespace sforge;

namespace {

Moebius<TruncatedSeries> lift(const Moebius<Rational>& m, const TruncatedSeries& like) {
  auto f = [&](const Rational& q) { return ring_traits<TruncatedSeries>::from_rational(q, like); };
  return {f(m.a), f(m.b), f(m.c), f(m.d)};
}

}  // namespace

TEST(Invariants, RationalConjugateAgreesExactly) {
  auto G = fixtures::lollipop(2, 1);
  auto raw = fixtures::lollipop2_params(1);
  Moebius<Rational> mu{2, 1, 1, 3};
  auto conj = conjugate_params(G, raw, mu);
  const int D = 3;
  auto g1 = build_group(G, make_params<TruncatedSeries>(G, raw, D), "v0", 3);
  auto g2 = build_group(conj.graph, make_params<TruncatedSeries>(conj.graph, conj.raw, D), "v0", 3);
  auto r = conjugation_invariant_report(g1, g2, 3, std::optional(lift(mu, g1.like())));
  EXPECT_TRUE(r.agree()) << (r.discrepancies.empty() ? "" : r.discrepancies.front());
  EXPECT_EQ(r.words, 4 * 9 + 4 * 3 + 4);
  EXPECT_TRUE(r.conjugator_checked);
}

TEST(Invariants, NegativeControl) {
  auto G = fixtures::lollipop(2, 1);
  auto raw = fixtures::lollipop2_params(1);
  auto bad = raw;
  bad.x["-l1"] = "7/2";
  const int D = 3;
  auto g1 = build_group(G, make_params<TruncatedSeries>(G, raw, D), "v0", 3);
  auto g2 = build_group(G, make_params<TruncatedSeries>(G, bad, D), "v0", 3);
  auto r = conjugation_invariant_report(g1, g2, 3);
  EXPECT_FALSE(r.agree());
  EXPECT_GT(r.discrepancies.size(), 0u);
}

TEST(InvariantsProperty, RandomConjugatesOverC) {
  std::mt19937 rng(23);
  auto G = fixtures::rose(2, 1);
  auto raw = fixtures::rose2_params();
  auto g1 = build_group(G, make_params<Complex>(G, raw), "v", 3);
  for (int trial = 0; trial < 3; ++trial) {
    Moebius<Rational> mu;
    do {
      mu = {frac(rng() % 9 + 1, 1), frac(static_cast<long>(rng() % 9) - 4, 2), frac(rng() % 3, 5), Rational(1 + rng() % 4)};
    } while (mu.det() == 0 || mu.c * -10 + mu.d == 0 || mu.c * -7 + mu.d == 0);
    auto conj = conjugate_params(G, raw, mu);
    GroupOptions opt;
    opt.check_schottky = false;
    SchottkyGroup<Complex> g2(conj.graph, make_params<Complex>(conj.graph, conj.raw), "v", 3, opt);
    auto r = conjugation_invariant_report(g1, g2, 3);
    EXPECT_TRUE(r.agree()) << trial << " " << (r.discrepancies.empty() ? "" : r.discrepancies.front());
  }
}

TEST(Invariants, LongWordsOverCLollipop) {
  auto G = fixtures::lollipop(2, 2);
  auto raw = fixtures::lollipop2_params(2);
  Moebius<Rational> mu{2, 1, 1, 3};
  auto conj = conjugate_params(G, raw, mu);
  GroupOptions opt;
  opt.reject_infinity_at_base = false;
  auto g1 = build_group(G, make_params<Complex>(G, raw), "v0", 6, opt);
  auto g2 = build_group(conj.graph, make_params<Complex>(conj.graph, conj.raw), "v0", 6, opt);
  auto r = conjugation_invariant_report(g1, g2, 6, std::optional<Moebius<Complex>>{}, 1e-8);
  EXPECT_TRUE(r.agree()) << (r.discrepancies.empty() ? "" : r.discrepancies.front());
  // u c u^-1 has the multiplier of c
  auto c = g1.fixed_points_of({-2, -2, -2, -2}).multiplier;
  auto w = g1.fixed_points_of({1, -2, -2, -2, -2, -1}).multiplier;
  EXPECT_NEAR(std::abs(w / c - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g1.fixed_points_of({2}).multiplier - 0.01), 0.0, 1e-9);
  auto bad = conj.raw;
  bad.x["l1"] = "1/5";
  auto g3 = build_group(conj.graph, make_params<Complex>(conj.graph, bad), "v0", 6, opt);
  EXPECT_FALSE(conjugation_invariant_report(g1, g3, 4, std::optional<Moebius<Complex>>{}, 1e-8).agree());
}

TEST(Invariants, ConjugateParamsToInfinity) {
  auto G = fixtures::rose(1, 1);
  auto raw = fixtures::genus1_params();
  // z -> 1/z swaps 0 and infinity
  auto conj = conjugate_params(G, raw, Moebius<Rational>{0, 1, 1, 0});
  EXPECT_EQ(conj.raw.x["l1"], "inf");
  EXPECT_EQ(conj.raw.x["-l1"], "0/1");
  EXPECT_EQ(conj.graph.infinity, std::vector<std::string>{"l1"});
}

TEST(Invariants, SplitComparison) {
  auto G = fixtures::rose(2, 1);
  auto raw = fixtures::rose2_params();
  raw.y["l1"] = "1/100";
  raw.y["l2"] = "1/100";
  for (auto [h1, h2] : {std::pair{"l1", "-l1"}, std::pair{"l1", "l2"}}) {
    auto cmp = split_comparison(G, raw, "v", "v", h1, h2, 3, 2);
    EXPECT_TRUE(cmp.agree()) << h1 << " " << h2;
    EXPECT_EQ(cmp.words.size(), 16u);
    EXPECT_EQ(type_of(cmp.split), type_of(G));
  }
}
