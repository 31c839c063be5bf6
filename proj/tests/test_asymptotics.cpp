#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fracgap/asymptotics.hpp"
#include "fracgap/bounds.hpp"
#include "oracles/oracle_values.hpp"

using namespace fracgap;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double pi2 = pi * pi;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
}  // namespace

TEST(Box1D, AlphaTwoExact) {
  const auto e = eigs_box1d_asymptotic(2.0);
  EXPECT_LT(rel(e.E1, pi2), 1e-8);
  EXPECT_LT(rel(e.E2, 4.0 * pi2), 1e-8);
  EXPECT_LT(rel(gap_box1d_asymptotic(2.0), 3.0 * pi2), 1e-8);
}

TEST(Box1D, ClosedFormMatchesQuadratureOracle) {
  const auto e = eigs_box1d_asymptotic(1.9);
  EXPECT_LT(rel(e.E1, oracle::box1d_S11_a1p9), 1e-8);
  EXPECT_LT(rel(e.E2, oracle::box1d_S22_a1p9), 1e-8);
  const auto f = eigs_box1d_asymptotic(1.95);
  EXPECT_LT(rel(f.E1, oracle::box1d_S11_a1p95), 1e-8);
  EXPECT_LT(rel(f.E2, oracle::box1d_S22_a1p95), 1e-8);
  const auto g = eigs_box1d_asymptotic(1.5);
  EXPECT_LT(rel(g.E2, oracle::box1d_S22_a1p5), 1e-8);
}

TEST(Box1D, PoleFallback) {
  const auto e = eigs_box1d_asymptotic(1.0);
  EXPECT_TRUE(std::isfinite(e.E1) && std::isfinite(e.E2));
  EXPECT_LT(rel(e.E1, oracle::box1d_S11_a1p0), 1e-8);
  EXPECT_LT(rel(e.E2, oracle::box1d_S22_a1p0), 1e-8);
  // just outside the fallback window the closed form is continuous with it
  EXPECT_LT(rel(gap_box1d_asymptotic(1.0 + 2e-3), gap_box1d_asymptotic(1.0)), 5e-3);
}

TEST(Box1D, GapIsDifference) {
  for (double a : {1.2, 1.5, 1.9, 1.95, 1.99}) {
    const auto e = eigs_box1d_asymptotic(a);
    EXPECT_NEAR(gap_box1d_asymptotic(a), e.E2 - e.E1, 1e-10 * (e.E2 - e.E1)) << a;
  }
}

TEST(Box2D, Parseval) {
  const auto e = eigs_box2d_asymptotic(2.0, 1.0);
  EXPECT_NEAR(e.E1, 2.0 * pi2, 1e-4);
  EXPECT_NEAR(e.E2, 5.0 * pi2, 1e-4);
  EXPECT_NEAR(eigs_box2d_asymptotic(2.0, 0.5).E1, 5.0 * pi2, 1e-4);
}

TEST(Harmonic1D, Values) {
  EXPECT_NEAR(gap_harmonic1d_asymptotic(2.0, 1.3), 2.6, 1e-14);
  EXPECT_NEAR(gap_harmonic1d_asymptotic(1.0, 1.0), 1.0 + 1.0 / std::sqrt(pi), 1e-14);
  const auto e = eigs_harmonic1d_asymptotic(2.0, 1.0);
  EXPECT_NEAR(e.E1, 1.0, 1e-14);
  EXPECT_NEAR(e.E2, 3.0, 1e-14);
  const auto f = eigs_harmonic1d_asymptotic(2.0, 4.0);
  EXPECT_NEAR(f.E1, 4.0, 1e-13);
  EXPECT_NEAR(f.E2, 12.0, 1e-13);
  for (double a : {0.5, 1.3, 1.9})
    for (double g : {0.5, 3.0}) {
      const auto p = eigs_harmonic1d_asymptotic(a, g);
      EXPECT_NEAR(p.E2 - p.E1, gap_harmonic1d_asymptotic(a, g), 1e-12);
      // gamma + gamma^{alpha/2} * const
      const double c = (gap_harmonic1d_asymptotic(a, g) - g) / std::pow(g, 0.5 * a);
      EXPECT_NEAR(c, gap_harmonic1d_asymptotic(a, 1.0) - 1.0, 1e-13);
    }
}

TEST(Harmonic2D, QuadratureOracle) {
  EXPECT_LT(rel(gap_harmonic2d_asymptotic(1.9, 4.0), oracle::har2d_gap_a1p9_eta4), 1e-10);
  EXPECT_LT(rel(gap_harmonic2d_asymptotic(1.5, 2.0), oracle::har2d_gap_a1p5_eta2), 1e-10);
}

TEST(Harmonic2D, AlphaTwoIsExactGap) {
  // with gammas (1, eta) the alpha = 2 gap is 2
  for (double eta : {1.0, 2.0, 4.0}) EXPECT_NEAR(gap_harmonic2d_asymptotic(2.0, eta), 2.0, 1e-12);
}

TEST(Harmonic2D, DecreasesWithEta) {
  double prev = gap_harmonic2d_asymptotic(1.5, 1.0);
  for (double eta : {4.0, 16.0, 64.0, 256.0}) {
    const double v = gap_harmonic2d_asymptotic(1.5, eta);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Bounds, EvaluateBounds) {
  const auto local = evaluate_bounds({ProblemKind::Local, 1, 2.0, {1.0, 1.0}});
  ASSERT_EQ(local.size(), 3u);
  EXPECT_NEAR(local[0].value, 3.0 * pi2, 1e-12);
  EXPECT_EQ(local[2].name, BoundName::Alpha2_gap2loc);
  EXPECT_NEAR(local[2].value, 3.0 * pi2, 1e-12);

  const auto dir = evaluate_bounds({ProblemKind::Classical, 2, 1.0, {1.0, 0.5}});
  ASSERT_EQ(dir.size(), 1u);
  EXPECT_EQ(dir[0].name, BoundName::ConjII_dirichlet);
  EXPECT_NEAR(dir[0].value, pi / 4.0, 1e-14);

  BoundInputs ws;
  ws.kind = ProblemKind::WholeSpace;
  ws.alpha = 1.0;
  const auto w = evaluate_bounds(ws);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NEAR(w[0].value, std::pow(2.0, 4.0 / 3.0) / 3.0, 1e-14);
}

TEST(Bounds, UnifiedWeakerThanConjIInOneD) {
  for (int i = 1; i <= 200; ++i) {
    const double a = 0.01 * i;
    EXPECT_LE(unified_gap_bound(1, a, {1.0, 1.0}), local_gap_lower_bound(1, a, {1.0, 1.0})) << a;
  }
}

TEST(Domain, RejectsBadAlpha) {
  EXPECT_THROW(eigs_box1d_asymptotic(2.5), DomainError);
  EXPECT_THROW(gap_harmonic2d_asymptotic(1.5, 0.5), DomainError);
}
