#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "sforge/schottky.hpp"

using namespace sforge;

TEST(Group, Genus1Diagonal) {
  auto G = fixtures::rose(1, 1);
  auto grp = build_group(G, make_params<TruncatedSeries>(G, fixtures::genus1_params(), 4), "v", 4);
  auto y = TruncatedSeries::variable(grp.like().space(), "l1");
  EXPECT_TRUE(grp.alpha(1).u.is_zero());
  EXPECT_TRUE(grp.alpha(-1).is_infinity());
  EXPECT_EQ(grp.beta(1), y);

  auto gc = build_group(G, make_params<Complex>(G, fixtures::genus1_params()), "v", 4);
  EXPECT_NEAR(std::abs(gc.beta(1) - Complex(0.02)), 0.0, 1e-15);
}

TEST(Group, LollipopMultiplierOrders) {
  auto G = fixtures::lollipop(2, 1);
  auto grp = build_group(G, make_params<TruncatedSeries>(G, fixtures::lollipop2_params(1), 5), "v0", 5);
  for (int i = 1; i <= 2; ++i) {
    EXPECT_GE(grp.beta(i).order(), 1);
    EXPECT_TRUE(same_point(grp.element({i}).apply(grp.alpha(i)), grp.alpha(i)));
    EXPECT_TRUE(same_point(grp.element({i}).apply(grp.alpha(-i)), grp.alpha(-i)));
  }
  // the multiplier is y_l: the conjugating edges cancel
  EXPECT_EQ(grp.beta(1), TruncatedSeries::variable(grp.like().space(), "l1"));
  EXPECT_EQ(grp.alpha(1).affine().constant_term(), Rational(0));
}

TEST(Group, CoincidentPointsRejected) {
  auto G = fixtures::rose(2, 1);
  auto raw = fixtures::rose2_params();
  raw.x["l2"] = "1";
  EXPECT_THROW(build_group(G, make_params<Complex>(G, raw), "v", 3), domain_error);
  raw.x.erase("t1");
  EXPECT_THROW(make_params<Complex>(G, raw), input_error);
}

TEST(Group, SchottkyConditionRejectsLargeMultipliers) {
  auto G = fixtures::rose(2, 1);
  auto raw = fixtures::rose2_params();
  raw.y["l1"] = nlohmann::json::array({0.6, 0.0});
  EXPECT_THROW(build_group(G, make_params<Complex>(G, raw), "v", 3), domain_error);
}

TEST(Group, InfinityBranchAtBaseRejected) {
  auto G = fixtures::rose(1, 1);
  G.infinity = {"-l1"};
  auto raw = fixtures::genus1_params();
  EXPECT_THROW(build_group(G, make_params<Complex>(G, raw), "v", 3), domain_error);
}

TEST(GroupProperty, WordsDistinctOverQ) {
  auto G = fixtures::rose(2, 1);
  RawParams raw = fixtures::rose2_params();
  raw.y["l1"] = "1/100";
  raw.y["l2"] = "1/125";
  auto grp = build_group(G, make_params<Rational>(G, raw), "v", 3);
  auto words = enumerate_reduced_words(2, 3);
  auto maps = grp.elements(words);
  for (std::size_t a = 0; a < maps.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) {
      const auto &m = maps[a], &n = maps[b];
      bool proportional = m.a * n.b == m.b * n.a && m.a * n.c == m.c * n.a && m.a * n.d == m.d * n.a &&
                          m.b * n.c == m.c * n.b && m.b * n.d == m.d * n.b && m.c * n.d == m.d * n.c;
      EXPECT_FALSE(proportional) << word_to_string(words[a]) << " vs " << word_to_string(words[b]);
    }
}

TEST(GroupProperty, PathAndGeneratorProductsAgree) {
  std::mt19937 rng(3);
  auto G = fixtures::lollipop(2, 1);
  RawParams raw = fixtures::lollipop2_params(1);
  auto gq = build_group(G, make_params<Rational>(G, raw), "v0", 4);
  for (const auto& w : enumerate_reduced_words(2, 3)) {
    auto m = gq.element(w);
    Moebius<Rational> n = Moebius<Rational>::identity();
    for (int k : w) n = n * gq.generator(k);
    EXPECT_TRUE(m.a * n.b == m.b * n.a && m.c * n.d == m.d * n.c && m.a * n.c == m.c * n.a) << word_to_string(w);
  }
}

TEST(GroupProperty, SeriesWordFixedPoints) {
  auto G = fixtures::theta(1, 0);
  auto grp = build_group(G, make_params<TruncatedSeries>(G, fixtures::theta_params(1, 0), 4), "a", 4);
  for (const auto& w : enumerate_reduced_words(2, 3)) {
    if (w.empty()) continue;
    auto fp = grp.fixed_points_of(w);
    auto m = grp.element(w);
    EXPECT_TRUE(same_point(m.apply(fp.attractive), fp.attractive)) << word_to_string(w);
    EXPECT_TRUE(same_point(m.apply(fp.repulsive), fp.repulsive)) << word_to_string(w);
    EXPECT_GE(fp.multiplier.order(), 1);
  }
}
