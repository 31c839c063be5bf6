#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fracgap/periodic_fso.hpp"

using namespace fracgap;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double tau = 2.0 * pi;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
}  // namespace

TEST(PeriodicAnalytic, OneD) {
  EXPECT_NEAR(periodic_gap_analytic(1, 1.0, {tau}), 1.0, 1e-15);
  EXPECT_NEAR(periodic_gap_analytic(1, 2.0, {1.0}), 12.0 * pi * pi, 1e-12);
}

TEST(PeriodicAnalytic, TwoDBranches) {
  EXPECT_NEAR(periodic_gap_analytic(2, 2.0, {1.0, 1.0}), 4.0 * pi * pi, 1e-12);
  // continuity at L1 = 2 L2
  for (double a : {0.4, 1.0, 1.7}) {
    const double mid = std::pow(tau, a) / std::pow(1.0, a) - std::pow(tau, a) / std::pow(2.0, a);
    EXPECT_NEAR(periodic_gap_analytic(2, a, {2.0, 1.0}), mid, 1e-12);
    EXPECT_NEAR(periodic_gap_analytic(2, a, {1.0, 2.0}), mid, 1e-12);
  }
}

TEST(PeriodicSolve, ZeroPotentialMatchesAnalytic) {
  const auto r1 = solve_periodic(Box{{1.0}}, FractionalOrder(2.0), {}, {{4}});
  EXPECT_LT(rel(r1.report.delta, 12.0 * pi * pi), 1e-12);
  EXPECT_EQ(r1.spectrum.discretization.at("gap_convention"), "positive_levels");
  for (double a : {0.5, 1.5})
    for (auto L : {std::vector<double>{1.0, 1.0}, {1.5, 1.0}, {3.0, 1.0}, {0.7, 1.9}}) {
      const auto r = solve_periodic(Box{L}, FractionalOrder(a), {}, {{4, 4}});
      EXPECT_LT(rel(r.report.delta, periodic_gap_analytic(2, a, L)), 1e-12) << a << " " << L[0];
    }
}

TEST(PeriodicSolve, ZeroPotentialLevelsAreMultipliers) {
  const auto r = solve_periodic(Box{{2.0}}, FractionalOrder(1.3), {}, {{3}});
  std::vector<double> expect;
  for (int m = -3; m <= 3; ++m) expect.push_back(std::pow(std::fabs(tau * m / 2.0), 1.3));
  std::sort(expect.begin(), expect.end());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(r.spectrum.eigenvalues(i), expect[i], 1e-12);
}

TEST(PeriodicSolve, ScalingLaw) {
  const double a = 1.2, D = 2.5;
  const auto unit = solve_periodic(Box{{1.0, 0.6}}, FractionalOrder(a), {}, {{4, 4}});
  const auto big = solve_periodic(Box{{D, 0.6 * D}}, FractionalOrder(a), {}, {{4, 4}});
  EXPECT_LT(rel(big.report.delta, unit.report.delta / std::pow(D, a)), 1e-13);
  // a smooth potential: coefficients of V(x) scale to D^alpha V on the dilated cell
  PeriodicCoefficients c{{{0}, 2.0}, {{1}, {0.3, 0.1}}, {{-1}, {0.3, -0.1}}};
  PeriodicCoefficients cd;
  for (const auto& [q, v] : c) cd[q] = v / std::pow(D, a);
  const auto s1 = solve_periodic(Box{{1.0}}, FractionalOrder(a), c, {{16}});
  const auto s2 = solve_periodic(Box{{D}}, FractionalOrder(a), cd, {{16}});
  EXPECT_LT(rel(s2.report.delta, s1.report.delta / std::pow(D, a)), 1e-8);
  EXPECT_EQ(s1.spectrum.discretization.at("gap_convention"), "two_smallest");
}

TEST(PeriodicSolve, PositivePotentialLiftsGround) {
  PeriodicCoefficients c{{{0, 0}, 1.0}, {{1, 0}, 0.25}, {{-1, 0}, 0.25}, {{0, 1}, {0.0, 0.2}}, {{0, -1}, {0.0, -0.2}}};
  const auto r = solve_periodic(Box{{1.0, 1.0}}, FractionalOrder(0.9), c, {{5, 5}});
  EXPECT_GT(r.report.E1, 0.0);
}

TEST(PeriodicSolve, NonHermitianRejected) {
  PeriodicCoefficients c{{{1}, {0.3, 0.1}}, {{-1}, {0.3, 0.1}}};
  EXPECT_THROW(solve_periodic(Box{{1.0}}, FractionalOrder(1.0), c, {{4}}), DomainError);
}

TEST(PhaseDiagram, Branches) {
  const auto rows = phase_diagram_sweep(FractionalOrder(1.5), {1.0, 1.5, 3.0});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].branch, "equal");
  EXPECT_EQ(rows[0].multiplicity, 4);
  EXPECT_EQ(rows[1].branch, "middle");
  EXPECT_NEAR(rows[1].delta, std::pow(tau, 1.5) * (1.0 - std::pow(1.5, -1.5)), 1e-11);
  EXPECT_EQ(rows[2].branch, "wide");
  EXPECT_NEAR(rows[2].delta, std::pow(tau, 1.5) * (std::pow(2.0, 1.5) - 1.0) / std::pow(3.0, 1.5), 1e-11);
  EXPECT_EQ(rows[0].E[0], 0.0);
}
