#include <gtest/gtest.h>

#include <set>

#include "sforge/words.hpp"

using namespace sforge;

namespace {

// u ~ v iff gamma_i^a u gamma_j^b = v for some |a|, |b| <= R.
bool double_coset_equivalent(const Word& u, const Word& v, int i, int j, int R) {
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b) {
      Word left(std::abs(a), a >= 0 ? i : -i), right(std::abs(b), b >= 0 ? j : -j);
      if (concat(concat(left, u), right) == v) return true;
    }
  return false;
}

}  // namespace

TEST(Words, CountFormula) {
  for (int g = 1; g <= 3; ++g)
    for (int L = 0; L <= 6; ++L) {
      if (g == 3 && L > 5) continue;
      auto words = enumerate_reduced_words(g, L);
      EXPECT_EQ(words.size(), reduced_word_count(g, L));
      std::set<Word> distinct(words.begin(), words.end());
      EXPECT_EQ(distinct.size(), words.size());
      for (const auto& w : words) EXPECT_EQ(reduce_word(w), w);
    }
  EXPECT_EQ(enumerate_reduced_words(1, 0), (std::vector<Word>{{}}));
  EXPECT_EQ(enumerate_reduced_words(1, 2).size(), 5u);
  EXPECT_EQ(enumerate_reduced_words(2, 1).size(), 5u);
}

TEST(Words, DepthFirstOrder) {
  auto w = enumerate_reduced_words(1, 2);
  EXPECT_EQ(w, (std::vector<Word>{{}, {1}, {1, 1}, {-1}, {-1, -1}}));
}

TEST(Words, CosetExamples) {
  EXPECT_EQ(coset_reps(1, 1, 4), (std::vector<Word>{{}}));
  EXPECT_EQ(coset_reps(2, 1, 1), (std::vector<Word>{{}, {2}, {-2}}));
  EXPECT_EQ(double_coset_reps(1, 1, 1, 5), (std::vector<Word>{{}}));
  EXPECT_EQ(double_coset_reps(2, 1, 1, 1), (std::vector<Word>{{}, {2}, {-2}}));
  EXPECT_THROW(coset_reps(2, 3, 1), input_error);
}

TEST(WordsProperty, CosetRepsCompleteAndDisjoint) {
  const int g = 2, L = 4;
  auto all = enumerate_reduced_words(g, L);
  for (int i = 1; i <= g; ++i) {
    auto reps = coset_reps(g, i, L);
    // disjoint: no two reps differ by a right power of gamma_i
    for (std::size_t a = 0; a < reps.size(); ++a)
      for (std::size_t b = 0; b < a; ++b)
        for (int m = -2 * L; m <= 2 * L; ++m) {
          Word p(std::abs(m), m >= 0 ? i : -i);
          EXPECT_NE(concat(reps[a], p), reps[b]);
        }
    // complete: every word is rep * gamma_i^m with a rep of length <= L
    std::set<Word> rs(reps.begin(), reps.end());
    for (const auto& w : all) {
      bool found = false;
      for (int m = -L; m <= L && !found; ++m) {
        Word p(std::abs(m), m >= 0 ? i : -i);
        found = rs.count(concat(w, p)) > 0;
      }
      EXPECT_TRUE(found) << word_to_string(w);
    }
  }
}

TEST(WordsProperty, DoubleCosetRepsMatchPartition) {
  const int g = 2, L = 4;
  auto all = enumerate_reduced_words(g, L);
  for (int i = 1; i <= g; ++i)
    for (int j = 1; j <= g; ++j) {
      auto reps = double_coset_reps(g, i, j, L);
      for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
          EXPECT_FALSE(double_coset_equivalent(reps[a], reps[b], i, j, 2 * L)) << i << j;
      for (const auto& w : all) {
        int hits = 0;
        for (const auto& r : reps) hits += double_coset_equivalent(w, r, i, j, L);
        EXPECT_EQ(hits, 1) << word_to_string(w) << " " << i << j;
      }
    }
}
