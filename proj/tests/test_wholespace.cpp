#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fracgap/asymptotics.hpp"
#include "fracgap/wholespace_fso.hpp"

using namespace fracgap;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

KGridSpec coarse2d() {
  KGridSpec kg;
  kg.points_2d = 64;
  return kg;
}
}  // namespace

TEST(WholeSpace, HarmonicOscillatorOneD) {
  for (double g : {1.0, 4.0}) {
    const auto r = solve_wholespace_gap(HarmonicSpec{{g}}, FractionalOrder(2.0));
    EXPECT_LT(rel(r.report.E1, g), 1e-6);
    EXPECT_LT(rel(r.report.E2, 3.0 * g), 1e-6);
  }
}

TEST(WholeSpace, HarmonicOscillatorTwoD) {
  const auto r = solve_wholespace_gap(HarmonicSpec{{1.0, 2.0}}, FractionalOrder(2.0), {}, coarse2d());
  EXPECT_NEAR(r.report.E1, 3.0, 1e-3);
  EXPECT_NEAR(r.report.E2, 5.0, 1e-3);
}

TEST(WholeSpace, GammaScalingLaw) {
  for (double a : {1.0, 1.5, 2.0}) {
    const auto one = solve_wholespace_gap(HarmonicSpec{{1.0}}, FractionalOrder(a));
    for (double g : {0.5, 2.7}) {
      const auto r = solve_wholespace_gap(HarmonicSpec{{g}}, FractionalOrder(a));
      EXPECT_LT(rel(r.report.delta, std::pow(g, 2.0 * a / (2.0 + a)) * one.report.delta), 1e-6) << a << " " << g;
    }
  }
}

TEST(WholeSpace, GridConvergence) {
  const auto base = solve_wholespace_gap(HarmonicSpec{{1.0}}, FractionalOrder(1.3));
  KGridSpec fine;
  fine.radius = {2.0 * std::stod(base.spectrum.discretization.at("R_k1"))};
  fine.spacing = {0.5 * std::stod(base.spectrum.discretization.at("h_k1"))};
  const auto r = solve_wholespace_gap(HarmonicSpec{{1.0}}, FractionalOrder(1.3), {}, fine);
  EXPECT_LT(rel(r.report.E1, base.report.E1), 1e-6);
  EXPECT_LT(rel(r.report.E2, base.report.E2), 1e-6);
}

TEST(WholeSpace, RayleighAndEdgeMass) {
  const auto r = solve_wholespace_gap(HarmonicSpec{{1.0}}, FractionalOrder(0.6));
  EXPECT_LT(std::stod(r.spectrum.discretization.at("rayleigh_max_rel")), 1e-8);
  EXPECT_LT(std::stod(r.spectrum.discretization.at("edge_mass")), 1e-6);
}

TEST(WholeSpace, AsymptoticAgreementOneD) {
  const auto r = solve_wholespace_gap(HarmonicSpec{{4.0}}, FractionalOrder(1.9));
  EXPECT_LT(rel(r.report.delta, gap_harmonic1d_asymptotic(1.9, 4.0)), 1e-2);
}

TEST(WholeSpace, BoundAttachedAndSatisfied) {
  const auto r = solve_wholespace_gap(HarmonicSpec{{1.0}}, FractionalOrder(1.0));
  const auto* b = r.report.bound(BoundName::WholeSpace_bdw876);
  ASSERT_NE(b, nullptr);
  EXPECT_GT(b->margin, 0.0);
}

TEST(WholeSpace, ShiftedCentreLeavesSpectrum) {
  QuadraticTrigPotential v;
  v.quadratic = {{2.0}, {0.7}};
  const auto shifted = solve_wholespace_gap(v, 1, FractionalOrder(1.4));
  const auto centred = solve_wholespace_gap(HarmonicSpec{{std::sqrt(2.0)}}, FractionalOrder(1.4));
  EXPECT_LT(rel(shifted.report.E1, centred.report.E1), 1e-10);
}

TEST(WholeSpace, TrigTermsOneD) {
  // sin(x) alone: x -> -x maps V to x^2 - sin x, same spectrum
  QuadraticTrigPotential plus{{{1.0}, {}}, {{0.5, TrigKind::Sin, {1.0}}}};
  QuadraticTrigPotential minus{{{1.0}, {}}, {{-0.5, TrigKind::Sin, {1.0}}}};
  const auto a = solve_wholespace_gap(plus, 1, FractionalOrder(1.5));
  const auto b = solve_wholespace_gap(minus, 1, FractionalOrder(1.5));
  EXPECT_LT(rel(a.report.E1, b.report.E1), 1e-9);
  // at alpha = 2, x^2 + c cos(x) has E1 between the harmonic values of its Hessian bounds minus |c|
  QuadraticTrigPotential c{{{1.0}, {}}, {{0.3, TrigKind::Cos, {1.0}}}};
  const auto r = solve_wholespace_gap(c, 1, FractionalOrder(2.0));
  EXPECT_GT(r.report.E1, std::sqrt(1.0 - 0.15) - 0.3);
  EXPECT_LT(r.report.E1, std::sqrt(1.0 + 0.15) + 0.3);
}

TEST(WholeSpace, HessianBoundsOfTrigCases) {
  const QuadraticTrigPotential one{{{2.0, 20.0}, {}}, {{1.0, TrigKind::Cos, {1.0, 0.0}}, {2.0, TrigKind::Sin, {0.0, 2.0}}}};
  const auto [g1, g2] = hessian_bounds(one, 2);
  EXPECT_NEAR(g1, std::sqrt(6.0) / 2.0, 1e-14);
  EXPECT_NEAR(g2 / g1, 4.0, 1e-13);
  const QuadraticTrigPotential two{{{1.0, 100.0}, {}}, {{1.0, TrigKind::Cos, {1.0, 0.0}}, {10.0, TrigKind::Sin, {0.0, 2.0}}}};
  const auto [h1, h2] = hessian_bounds(two, 2);
  EXPECT_NEAR(h1, std::sqrt(2.0) / 2.0, 1e-14);
  EXPECT_NEAR(h2 / h1, 4.0 * std::sqrt(15.0), 1e-12);
}

TEST(WholeSpace, IncommensurateSpacingRejected) {
  QuadraticTrigPotential v{{{1.0}, {}}, {{0.2, TrigKind::Cos, {1.0}}}};
  KGridSpec kg;
  kg.spacing = {0.3};
  EXPECT_THROW(solve_wholespace_gap(v, 1, FractionalOrder(1.0), kg), DomainError);
}

TEST(WholeSpaceBounds, Formula) {
  EXPECT_NEAR(wholespace_gap_lower_bound(2.0, 1.7, 1.7), 2.0 * 1.7, 1e-14);
  EXPECT_NEAR(wholespace_gap_lower_bound(1.0, 1.0, 4.0), std::pow(2.0, 4.0 / 3.0) / 3.0 * std::pow(4.0, -1.0 / 3.0), 1e-14);
  EXPECT_NEAR(wholespace_gap_lower_bound(1.0, 1.0, 1.0), std::pow(2.0, 4.0 / 3.0) / 3.0, 1e-14);
  EXPECT_LT(wholespace_gap_lower_bound(1e-9, 1.0, 1.0), 1e-8);
  EXPECT_THROW(wholespace_gap_lower_bound(1.0, 2.0, 1.0), DomainError);
}

TEST(Well, AlphaTwoApproachesBox) {
  WellOptions o;
  o.modes_per_dim = {64};
  const auto r = solve_well(Box{{1.0}}, 1e4, FractionalOrder(2.0), o);
  EXPECT_LT(std::fabs(r.report.E1 - std::numbers::pi * std::numbers::pi), 0.5);
  EXPECT_TRUE(r.report.lower_bounds.empty());
  EXPECT_THROW(solve_well(Box{{1.0}}, -1.0, FractionalOrder(2.0)), DomainError);
}
