#include <gtest/gtest.h>

#include <random>

#include "sforge/moebius.hpp"

using namespace sforge;

namespace {

using CP = ProjectivePoint<Complex>;
using QP = ProjectivePoint<Rational>;
using SP = ProjectivePoint<TruncatedSeries>;

template <class T>
T relation_defect(const Moebius<T>& phi, const ProjectivePoint<T>& xp, const ProjectivePoint<T>& xm, const T& y,
                  const ProjectivePoint<T>& z) {
  auto fz = phi.apply(z);
  return det2(fz, xp) * det2(z, xm) - y * det2(fz, xm) * det2(z, xp);
}

Complex rand_c(std::mt19937& rng, double r = 2.0) {
  std::uniform_real_distribution<double> U(-r, r);
  return {U(rng), U(rng)};
}

Moebius<Complex> rand_mobius(std::mt19937& rng) {
  return {rand_c(rng), rand_c(rng), rand_c(rng), rand_c(rng)};
}

bool projectively_equal(const Moebius<Complex>& m, const Moebius<Complex>& n, double tol) {
  // m = s n for some scalar s
  Complex s = std::abs(n.a) > std::abs(n.d) ? m.a / n.a : m.d / n.d;
  return std::abs(m.a - s * n.a) + std::abs(m.b - s * n.b) + std::abs(m.c - s * n.c) + std::abs(m.d - s * n.d) <
         tol * (std::abs(m.a) + std::abs(m.b) + std::abs(m.c) + std::abs(m.d));
}

}  // namespace

TEST(Moebius, DiagonalAtom) {
  Complex q(0.1, 0.05);
  auto m = phi_edge(CP::finite(0.0), CP::infinity(), q);
  EXPECT_NEAR(std::abs(m.b), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m.c), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m.a / m.d - q), 0.0, 1e-15);
  auto fp = fixed_points(m);
  EXPECT_NEAR(std::abs(fp.attractive.u), 0.0, 1e-15);
  EXPECT_TRUE(fp.repulsive.is_infinity());
  EXPECT_NEAR(std::abs(fp.multiplier - q), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(multiplier(m * m) - q * q), 0.0, 1e-15);
  EXPECT_TRUE(m.apply(CP::infinity()).is_infinity());
  EXPECT_NEAR(std::abs(m.derivative(Complex(3.0, 1.0)) - q), 0.0, 1e-15);
}

TEST(Moebius, SeriesDiagonalAtom) {
  auto sp = make_space({"y"}, 5);
  auto y = TruncatedSeries::variable(sp, "y");
  TruncatedSeries zero(sp), one(sp, Rational(1));
  auto m = phi_edge(SP{zero, one}, SP{one, zero}, y);
  auto fp = fixed_points(m);
  EXPECT_TRUE(fp.attractive.u.is_zero());
  EXPECT_TRUE(fp.repulsive.w.is_zero());
  EXPECT_EQ(fp.multiplier, y);
}

TEST(Moebius, ZeroMultiplierGivesConstantMap) {
  auto m = phi_edge(QP::finite(Rational(2)), QP::finite(Rational(-3)), Rational(0));
  for (int z : {-5, 0, 1, 7}) EXPECT_EQ(m.apply(QP::finite(Rational(z))).affine(), Rational(2));
}

TEST(Moebius, RationalDefiningRelation) {
  Rational y(1, 4);
  auto xp = QP::finite(Rational(1)), xm = QP::finite(Rational(-1));
  auto m = phi_edge(xp, xm, y);
  for (auto z : {QP::finite(Rational(0)), QP::finite(Rational(2)), QP::infinity()})
    EXPECT_EQ(relation_defect(m, xp, xm, y, z), Rational(0));
  EXPECT_THROW(phi_edge(xp, xp, y), domain_error);
  // phi_{-h} = phi_h^{-1}
  auto inv = phi_edge(xm, xp, y) * m;
  EXPECT_EQ(inv.b, Rational(0));
  EXPECT_EQ(inv.c, Rational(0));
  EXPECT_EQ(inv.a, inv.d);
}

TEST(MoebiusProperty, DefiningRelationComplex) {
  std::mt19937 rng(1);
  for (int t = 0; t < 100; ++t) {
    auto xp = CP::finite(rand_c(rng)), xm = CP::finite(rand_c(rng));
    Complex y = 0.3 * rand_c(rng, 1.0);
    auto m = phi_edge(xp, xm, y);
    auto z = CP::finite(rand_c(rng, 5.0));
    auto fz = normalized(m.apply(z));
    EXPECT_LT(std::abs(relation_defect(m, xp, xm, y, CP{z})) / (1 + std::abs(m.det())), 1e-10);
    (void)fz;
  }
}

TEST(MoebiusProperty, DefiningRelationSeries) {
  auto sp = make_space({"y"}, 6);
  auto y = TruncatedSeries::variable(sp, "y");
  auto c = [&](int k) { return TruncatedSeries(sp, Rational(k)); };
  auto xp = SP{c(2), c(1)}, xm = SP{c(-1), c(3)};
  auto m = phi_edge(xp, xm, y);
  for (int k : {0, 5, -7}) EXPECT_TRUE(relation_defect(m, xp, xm, y, SP{c(k), c(1)}).is_zero());
}

TEST(MoebiusProperty, AntiHomomorphism) {
  std::mt19937 rng(2);
  std::vector<Moebius<Complex>> atoms;
  for (int i = 0; i < 3; ++i) atoms.push_back(phi_edge(CP::finite(rand_c(rng)), CP::finite(rand_c(rng)), Complex(0.2, 0.1)));
  auto atom = [&](int code) {
    auto m = atoms[code_index(code)];
    return code > 0 ? m : m.inverse();
  };
  auto rand_path = [&](int len) {
    EdgePath p;
    while (static_cast<int>(p.size()) < len) {
      int c = (1 + static_cast<int>(rng() % 3)) * (rng() % 2 ? 1 : -1);
      if (!p.empty() && p.back() == -c) continue;
      p.push_back(c);
    }
    return p;
  };
  EXPECT_TRUE(projectively_equal(word_to_map<Complex>({}, atom), Moebius<Complex>::identity(), 1e-15));
  EXPECT_TRUE(projectively_equal(word_to_map<Complex>({2}, atom), atoms[1], 1e-15));
  EXPECT_THROW(word_to_map<Complex>({1, -1}, atom), domain_error);
  for (int t = 0; t < 50; ++t) {
    auto r = rand_path(1 + static_cast<int>(rng() % 4)), s = rand_path(1 + static_cast<int>(rng() % 4));
    if (r.back() == -s.front()) continue;
    EdgePath rs = r;
    rs.insert(rs.end(), s.begin(), s.end());
    EXPECT_TRUE(projectively_equal(word_to_map<Complex>(rs, atom),
                                   word_to_map<Complex>(s, atom) * word_to_map<Complex>(r, atom), 1e-12));
  }
}

TEST(MoebiusProperty, CompositionActsAsProduct) {
  std::mt19937 rng(3);
  for (int t = 0; t < 50; ++t) {
    auto m = rand_mobius(rng), n = rand_mobius(rng);
    auto z = CP::finite(rand_c(rng));
    auto lhs = normalized((m * n).apply(z)), rhs = normalized(m.apply(normalized(n.apply(z))));
    EXPECT_TRUE(same_point(lhs, rhs, 1e-10));
    // chain rule
    auto nz = normalized(n.apply(z)).u;
    EXPECT_NEAR(std::abs((m * n).derivative(z.u) - m.derivative(nz) * n.derivative(z.u)), 0.0,
                1e-8 * (1 + std::abs((m * n).derivative(z.u))));
  }
  EXPECT_EQ(Moebius<Rational>::identity().derivative(Rational(5)), Rational(1));
}

TEST(MoebiusProperty, FixedPointsEquivariantUnderRationalConjugation) {
  std::mt19937 rng(4);
  for (int t = 0; t < 30; ++t) {
    auto r = [&] { return frac(static_cast<int>(rng() % 11) - 5, 1 + rng() % 4); };
    Moebius<Rational> g{r(), r(), r(), r()};
    if (g.det() == 0) continue;
    Rational l1 = frac(1 + static_cast<int>(rng() % 5), 1), l2 = frac(1, 3 + rng() % 5);
    Moebius<Rational> diag{l1, 0, 0, l2};
    auto m = g * diag * g.inverse();
    auto fp = fixed_points(m);
    EXPECT_TRUE(same_point(fp.attractive, g.apply(QP::finite(0))) || same_point(fp.attractive, g.apply(QP::infinity())));
    // diag attracts toward 0 iff l2 > l1 in the affine chart z -> (l1/l2) z
    auto expected_att = l1 > l2 ? g.apply(QP::infinity()) : g.apply(QP::finite(0));
    EXPECT_TRUE(same_point(fp.attractive, expected_att));
    EXPECT_EQ(fp.multiplier, l1 > l2 ? l2 / l1 : l1 / l2);
    Rational beta = fp.multiplier;
    EXPECT_EQ(multiplier(Moebius<Rational>(m * m)), beta * beta);
    // conjugate again by another map
    Moebius<Rational> h{r() + 7, r(), r(), r() + 9};
    if (h.det() == 0) continue;
    auto fq = fixed_points(h * m * h.inverse());
    EXPECT_EQ(fq.multiplier, beta);
    EXPECT_TRUE(same_point(fq.attractive, h.apply(fp.attractive)));
    EXPECT_TRUE(same_point(fq.repulsive, h.apply(fp.repulsive)));
  }
  EXPECT_THROW(fixed_points(Moebius<Rational>{0, -1, 1, 0}), domain_error);
  EXPECT_THROW(fixed_points(Moebius<Rational>{1, 1, 0, 1}), domain_error);
}

TEST(MoebiusProperty, MultiplierRelationComplex) {
  std::mt19937 rng(5);
  for (int t = 0; t < 40; ++t) {
    auto m = rand_mobius(rng);
    FixedPoints<Complex> fp;
    try {
      fp = fixed_points(m);
    } catch (const domain_error&) {
      continue;
    }
    if (fp.attractive.is_infinity() || fp.repulsive.is_infinity()) continue;
    Complex a = fp.attractive.u, b = fp.repulsive.u, z = rand_c(rng, 3.0);
    Complex gz = normalized(m.apply(z)).u;
    EXPECT_NEAR(std::abs((gz - a) / (gz - b) - fp.multiplier * (z - a) / (z - b)), 0.0, 1e-8);
  }
}

TEST(MoebiusProperty, SeriesWordFixedPoints) {
  auto sp = make_space({"y1", "y2"}, 6);
  auto c = [&](int k) { return TruncatedSeries(sp, Rational(k)); };
  auto y1 = TruncatedSeries::variable(sp, "y1"), y2 = TruncatedSeries::variable(sp, "y2");
  auto p1 = phi_edge(SP{c(0), c(1)}, SP{c(1), c(1)}, y1);
  auto p2 = phi_edge(SP{c(3), c(1)}, SP{c(6), c(1)}, y2);
  auto m = p2 * p1;  // path (l1, l2)
  auto fp = fixed_points(m);
  EXPECT_EQ(fp.attractive.affine().constant_term(), Rational(3));
  EXPECT_EQ(fp.repulsive.affine().constant_term(), Rational(1));
  EXPECT_TRUE(same_point(m.apply(fp.attractive), fp.attractive));
  EXPECT_TRUE(same_point(m.apply(fp.repulsive), fp.repulsive));
  EXPECT_EQ(fp.multiplier.order(), 2);
  // relation at a sample point
  auto z = c(11);
  auto a = fp.attractive.affine(), b = fp.repulsive.affine();
  auto gz = m.apply(z).affine();
  EXPECT_EQ((gz - a) * (z - b), fp.multiplier * (z - a) * (gz - b));
  // derivative of a length-l word has order >= l
  auto w = p1 * p2 * p1.inverse();
  EXPECT_GE((p2 * p1).derivative(c(20)).order(), 2);
  EXPECT_GE((p1 * p2 * p1).derivative(c(20)).order(), 3);
  (void)w;
  // rescaling does not change the outputs
  auto fs = fixed_points(scaled(m, c(5)));
  EXPECT_TRUE(same_point(fs.attractive, fp.attractive));
  EXPECT_EQ(fs.multiplier, fp.multiplier);
}

TEST(Moebius, CrossRatio) {
  auto q = [](int k) { return QP::finite(Rational(k)); };
  EXPECT_EQ(cross_ratio(q(0), q(1), q(2), q(3)), Rational(4, 3));
  EXPECT_EQ(cross_ratio(q(5), q(6), q(7), q(8)), Rational(4, 3));
  EXPECT_THROW(cross_ratio(q(0), q(1), q(1), q(0)), domain_error);
  // infinity in the last slot
  EXPECT_EQ(cross_ratio(q(0), q(1), q(2), QP::infinity()), Rational(-2) / Rational(-1));
}
