#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "sforge/periods.hpp"

using namespace sforge;

namespace {

const Complex two_pi_i(0, 2 * M_PI);

Complex unwrap(Complex v) { return v - two_pi_i * std::round(v.imag() / (2 * M_PI)); }

}  // namespace

TEST(Periods, Genus1Exact) {
  auto G = fixtures::rose(1, 1);
  auto gs = build_group(G, make_params<TruncatedSeries>(G, fixtures::genus1_params(), 5), "v", 5);
  auto P = period_matrix(gs, 5);
  EXPECT_EQ(P.P[0][0], TruncatedSeries::variable(gs.like().space(), "l1"));

  auto gc = build_group(G, make_params<Complex>(G, fixtures::genus1_params()), "v", 4);
  EXPECT_NEAR(std::abs(a_cycle_integral(gc, 1, 1, 4) - two_pi_i), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(b_period_numeric(gc, 1, 1, Complex(1), 4) - std::log(0.02)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(period_matrix(gc, 4).P[0][0] - 0.02), 0.0, 1e-15);
}

TEST(Periods, Genus2CrossValidation) {
  auto G = fixtures::rose(2, 1);
  auto grp = build_group(G, make_params<Complex>(G, fixtures::rose2_params()), "v", 8);
  auto P = period_matrix(grp, 8).P;
  EXPECT_NEAR(std::abs(P[0][1] - P[1][0]), 0.0, 1e-8 * std::abs(P[0][1]));
  Complex z0 = default_base_point(grp), z1 = z0 + Complex(0.7, 2.5);
  for (int i = 1; i <= 2; ++i) {
    EXPECT_LT(std::abs(P[i - 1][i - 1]), 1.0);
    for (int j = 1; j <= 2; ++j) {
      Complex b = b_period_numeric(grp, i, j, z0, 8);
      EXPECT_NEAR(std::abs(std::exp(b) / P[i - 1][j - 1] - 1.0), 0.0, 1e-6) << i << j;
      Complex b1 = b_period_numeric(grp, i, j, z1, 8);
      EXPECT_NEAR(std::abs(unwrap(b1 - b)), 0.0, 1e-8) << i << j;
      Complex a = a_cycle_integral(grp, i, j, 8);
      EXPECT_NEAR(std::abs(a - (i == j ? two_pi_i : Complex(0))), 0.0, 1e-6) << i << j;
    }
  }
}

TEST(PeriodsProperty, SeriesTruncationConsistency) {
  auto G = fixtures::rose(2, 1);
  const int D = 3;
  auto grp = build_group(G, make_params<TruncatedSeries>(G, fixtures::rose2_params(), D), "v", D + 2);
  auto a = period_matrix(grp, D).P, b = period_matrix(grp, D + 2).P;
  EXPECT_EQ(a, b);
  EXPECT_EQ(a[0][1], a[1][0]);
}

TEST(PeriodsProperty, SeriesMatchesComplex) {
  // evaluating the series period at numeric y agrees with the complex computation
  auto G = fixtures::rose(2, 1);
  auto raw = fixtures::rose2_params();
  raw.y["l1"] = "1/200";
  raw.y["l2"] = "1/300";
  const int D = 5;
  auto gs = build_group(G, make_params<TruncatedSeries>(G, raw, D), "v", D);
  auto gc = build_group(G, make_params<Complex>(G, raw), "v", 8);
  auto Ps = period_matrix(gs, D).P;
  auto Pc = period_matrix(gc, 8).P;
  const double y1 = 1.0 / 200, y2 = 1.0 / 300;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double v = 0;
      for (const auto& [mono, c] : Ps[i][j].terms())
        v += c.get_d() * std::pow(y1, monomial_exponent(mono, 0)) * std::pow(y2, monomial_exponent(mono, 1));
      EXPECT_NEAR(std::abs(Complex(v) / Pc[i][j] - 1.0), 0.0, 1e-6) << i << j;
    }
}

TEST(Periods, SecondKindTelescopedMatchesQuadrature) {
  auto G = fixtures::rose(2, 1);
  auto grp = build_group(G, make_params<Complex>(G, fixtures::rose2_params()), "v", 7);
  Complex z0 = default_base_point(grp);
  for (int k = 2; k <= 3; ++k) {
    SecondKind<Complex> w(grp, "t1", k, 7);
    for (int i = 1; i <= 2; ++i) {
      Complex exact = second_kind_b_period(grp, "t1", k, i, 7);
      Complex num = b_path_integral(grp, i, z0, std::cref(w));
      EXPECT_NEAR(std::abs(exact - num), 0.0, 1e-8 * std::max(1.0, std::abs(exact))) << k << i;
      EXPECT_NEAR(std::abs(a_cycle_integral_of(grp, i, std::cref(w))), 0.0, 1e-9);
    }
  }
}

TEST(Eta, KroneckerPeriods) {
  auto G = fixtures::rose(2, 1);
  auto grp = build_group(G, make_params<Complex>(G, fixtures::rose2_params()), "v", 7);
  auto eta = eta_basis(grp, "t1", 7);
  Complex z0 = default_base_point(grp);
  for (int j = 1; j <= 2; ++j) {
    auto f = eta_function(grp, eta, j, 7);
    for (int i = 1; i <= 2; ++i)
      EXPECT_NEAR(std::abs(b_path_integral(grp, i, z0, f) - (i == j ? 1.0 : 0.0)), 0.0, 1e-6) << i << j;
  }
}

TEST(Eta, ACycleNormalizationIsSingular) {
  auto G = fixtures::rose(2, 1);
  auto grp = build_group(G, make_params<Complex>(G, fixtures::rose2_params()), "v", 6);
  EXPECT_THROW(eta_basis(grp, "t1", 6, EtaCycles::a_cycles), domain_error);
  auto b = eta_basis(grp, "t1", 6, EtaCycles::b_paths);
  EXPECT_EQ(b.system, eta_basis(grp, "t1", 6).system);
}

TEST(Eta, Genus1ConstantTerm) {
  auto G = fixtures::rose(1, 1);
  auto gs = build_group(G, make_params<TruncatedSeries>(G, fixtures::genus1_params(), 3), "v", 3);
  auto eta = eta_basis(gs, "t1", 3);
  // alpha_1 = 0, x_t = 1: C = -(alpha_1 - x_t) = 1
  EXPECT_EQ(eta.coeffs[0][0].constant_term(), Rational(1));
}

TEST(Eta, VandermondeIdentity) {
  std::mt19937 rng(5);
  for (int g = 1; g <= 4; ++g)
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Rational> alpha;
      while (static_cast<int>(alpha.size()) < g) {
        Rational a = frac(static_cast<long>(rng() % 41) - 20, 1 + rng() % 7);
        if (a != 3 && std::find(alpha.begin(), alpha.end(), a) == alpha.end()) alpha.push_back(a);
      }
      Rational xt = 3;
      auto m = displayed_constant_matrix(alpha, xt);
      Rational factor = 1;
      for (int j = 1; j <= g; ++j) factor /= -j;
      EXPECT_EQ(determinant(m), factor * vandermonde_product(alpha, xt));
    }
}

TEST(Linalg, InverseOverSeries) {
  auto sp = make_space({"a", "b"}, 3);
  auto a = TruncatedSeries::variable(sp, "a"), b = TruncatedSeries::variable(sp, "b");
  auto one = TruncatedSeries(sp, Rational(1));
  Matrix<TruncatedSeries> m{{one + a, b}, {a * b, one - b}};
  auto inv = inverse_matrix(m);
  auto id = multiply(m, inv);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(id[i][j], i == j ? one : TruncatedSeries(sp));
  Matrix<Complex> s{{1.0, 2.0}, {2.0, 4.0}};
  EXPECT_THROW(inverse_matrix(s), domain_error);
}

TEST(GaussManin, Genus1) {
  auto G = fixtures::rose(1, 1);
  auto raw = fixtures::genus1_params();
  auto r = gauss_manin_check(G, raw, "v", "t1", default_direction(raw), 1e-4, 4);
  EXPECT_TRUE(r.passed()) << r.eta_residual << " " << r.omega_residual;
}

TEST(GaussManin, Genus2DefaultAndRandomDirections) {
  auto G = fixtures::rose(2, 1);
  auto raw = fixtures::rose2_params();
  auto r = gauss_manin_check(G, raw, "v", "t1", default_direction(raw), 1e-4, 7);
  EXPECT_TRUE(r.passed()) << r.eta_residual << " " << r.omega_residual;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  ParamDirection d;
  for (const auto& key : {"x:l1", "x:-l2", "x:t1"}) d[key] = Complex(u(rng), u(rng));
  d["y:l2"] = Complex(u(rng), u(rng)) * 0.01;
  auto r2 = gauss_manin_check(G, raw, "v", "t1", d, 1e-4, 7);
  EXPECT_TRUE(r2.passed()) << r2.eta_residual << " " << r2.omega_residual;
  EXPECT_THROW(perturb_params(raw, {{"z:l1", 1.0}}, 0.1), input_error);
}
