#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fracgap/specfun.hpp"
#include "oracles/oracle_values.hpp"

using namespace fracgap;
namespace sf = fracgap::specfun;

namespace {
constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
}  // namespace

TEST(Gamma, HalfIntegerAndFactorial) {
  EXPECT_LT(rel(sf::gamma(0.5), std::sqrt(pi)), 1e-14);
  EXPECT_LT(rel(sf::gamma(5.0), 24.0), 1e-14);
  EXPECT_LT(rel(sf::gamma(1.5), 0.5 * std::sqrt(pi)), 1e-14);
  EXPECT_LT(rel(sf::gamma(-0.5), -2.0 * std::sqrt(pi)), 1e-14);
}

TEST(Gamma, PolesThrow) {
  EXPECT_THROW(sf::gamma(0.0), DomainError);
  EXPECT_THROW(sf::gamma(-3.0), DomainError);
}

TEST(Gamma, Recurrence) {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(0.1, 20.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(gen);
    EXPECT_LT(rel(sf::gamma(x + 1.0), x * sf::gamma(x)), 1e-12) << x;
  }
}

TEST(Hyp1F2, TrivialCases) {
  EXPECT_EQ(sf::hyp1f2(0.3, 1.7, 2.2, 0.0), 1.0);
  // (1)_k / ((1)_k (1)_k) = 1/k!, so the series is sum z^k / (k!)^2 = I0(2 sqrt z)
  for (double z : {0.5, 2.0, 7.0}) EXPECT_LT(rel(sf::hyp1f2(1.0, 1.0, 1.0, z), std::cyl_bessel_i(0.0, 2.0 * std::sqrt(z))), 1e-13);
}

TEST(Hyp1F2, Oracle) {
  EXPECT_NEAR(sf::hyp1f2(2.0, 1.0, 0.5, -pi * pi / 4.0), oracle::hyp1f2_2_1_half_mpi2q, 1e-12);
  EXPECT_LT(rel(sf::hyp1f2(1.3, 0.7, 2.2, -5.0), oracle::hyp1f2_1p3_0p7_2p2_m5), 1e-12);
}

TEST(Hyp1F2, RejectsPoleParameters) { EXPECT_THROW(sf::hyp1f2(1.0, -2.0, 1.0, 0.5), DomainError); }

TEST(Hyp1F2, NonConvergenceReported) {
  sf::SeriesControl c;
  c.max_terms = 3;
  EXPECT_THROW(sf::hyp1f2(2.0, 1.0, 0.5, -50.0, c), ConvergenceError);
}

TEST(Hyp2F1, Oracle) {
  EXPECT_LT(rel(sf::hyp2f1(0.5, 2.0, 2.5, 0.25), oracle::hyp2f1_half_2_5h_quarter), 1e-12);
  sf::SeriesControl c;
  c.max_terms = 2000;
  EXPECT_LT(rel(sf::hyp2f1(-1.5, 0.3, 1.7, -0.8, c), oracle::hyp2f1_m1p5_0p3_1p7_m0p8), 1e-12);
}

TEST(Hyp2F1, BinomialIdentity) {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> ua(-3.0, 3.0), uz(-0.9, 0.9), ub(0.2, 4.0);
  sf::SeriesControl c;
  c.max_terms = 5000;
  for (int i = 0; i < 50; ++i) {
    const double a = ua(gen), b = ub(gen), z = uz(gen);
    EXPECT_NEAR(sf::hyp2f1(a, b, b, z, c) * std::pow(1.0 - z, a), 1.0, 1e-12) << a << " " << z;
  }
  EXPECT_EQ(sf::hyp2f1(0.4, 1.1, 2.3, 0.0), 1.0);
}

TEST(Hyp2F1, DomainChecks) {
  EXPECT_THROW(sf::hyp2f1(0.5, 1.0, 1.5, 1.0), DomainError);
  EXPECT_THROW(sf::hyp2f1(0.5, 1.0, 0.0, 0.5), DomainError);
}

TEST(FracLaplacianConstant, AlphaOne) {
  EXPECT_LT(rel(sf::frac_laplacian_constant(1, 1.0), 1.0 / pi), 1e-14);
}

TEST(FracLaplacianConstant, MatchesDefinition) {
  for (int n = 1; n <= 3; ++n)
    for (double a : {0.3, 0.9, 1.5, 1.7}) {
      const double def = std::pow(2.0, a) * std::tgamma(0.5 * (n + a)) /
                         (std::pow(pi, 0.5 * n) * std::fabs(std::tgamma(-0.5 * a)));
      EXPECT_LT(rel(sf::frac_laplacian_constant(n, a), def), 1e-13);
    }
}

TEST(FracLaplacianConstant, LimitRatios) {
  for (int n = 1; n <= 3; ++n) {
    const double g = std::tgamma(0.5 * n), pn = std::pow(pi, 0.5 * n);
    const double near2 = 2.0 - 1e-4;
    EXPECT_NEAR(sf::frac_laplacian_constant(n, near2) / (n * g * (2.0 - near2) / pn), 1.0, 1e-3);
    const double near0 = 1e-4;
    EXPECT_NEAR(sf::frac_laplacian_constant(n, near0) / (near0 * g / (2.0 * pn)), 1.0, 1e-3);
  }
}

TEST(FracLaplacianConstant, AlphaTwoRejected) { EXPECT_THROW(sf::frac_laplacian_constant(1, 2.0), DomainError); }
