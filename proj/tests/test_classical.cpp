#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "fracgap/classical_fso.hpp"
#include "fracgap/local_fso.hpp"
#include "oracles/oracle_values.hpp"

using namespace fracgap;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double pi2 = pi * pi;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
}  // namespace

TEST(SineTransform, SpecialValues) {
  const auto at_pole = sine_mode_fourier_transform(1, 1.0, pi);
  EXPECT_NEAR(at_pole.real(), 0.0, 1e-15);
  // sqrt2 int_0^1 sin(pi x) e^{-i pi x} dx = -i / sqrt2
  EXPECT_NEAR(at_pole.imag(), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(sine_mode_fourier_transform(2, 1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(sine_mode_fourier_transform(1, 1.0, 0.0).real(), 2.0 * std::sqrt(2.0) / pi, 1e-15);
}

TEST(SineTransform, MatchesRationalFormAwayFromPole) {
  for (int l = 1; l <= 4; ++l)
    for (double k : {0.3, 2.0, 7.7, 25.0, -4.1}) {
      const std::complex<double> e = std::polar(1.0, -k);
      const std::complex<double> ref = std::sqrt(2.0) * l * pi * ((l % 2 ? -1.0 : 1.0) * e - 1.0) / (k * k - l * l * pi2);
      EXPECT_LT(std::abs(sine_mode_fourier_transform(l, 1.0, k) - ref), 1e-13) << l << " " << k;
    }
}

TEST(SineTransform, ContinuousAcrossPole) {
  const double a = 3.0 * pi / 1.7;
  const auto below = sine_mode_fourier_transform(3, 1.7, a - 2e-4);
  const auto inside = sine_mode_fourier_transform(3, 1.7, a - 5e-5);
  EXPECT_LT(std::abs(below - inside), 1e-3);
}

TEST(SineTransform, DilationFromUnitInterval) {
  // phi_hat_L(k) = sqrt(L) phi_hat_1(kL)
  for (double k : {0.5, 3.3, 9.0})
    EXPECT_LT(std::abs(sine_mode_fourier_transform(2, 2.5, k) - std::sqrt(2.5) * sine_mode_fourier_transform(2, 1.0, 2.5 * k)),
              1e-14);
}

TEST(Stiffness, ParsevalAtAlphaTwo) {
  const Eigen::MatrixXd s = classical_stiffness(Box{{1.0}}, FractionalOrder(2.0), {6});
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) EXPECT_NEAR(s(i, j), i == j ? (i + 1) * (i + 1) * pi2 : 0.0, 1e-7 * pi2 * 36);
  const Eigen::MatrixXd s2 = classical_stiffness(Box{{1.0, 0.6}}, FractionalOrder(2.0), {3, 3});
  const auto modes = tensor_modes({3, 3});
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double lam = std::pow(modes[i][0] * pi, 2) + std::pow(modes[i][1] * pi / 0.6, 2);
    EXPECT_LT(rel(s2(i, i), lam), 1e-7);
  }
}

TEST(Stiffness, OracleEntries) {
  const Eigen::MatrixXd a19 = classical_stiffness(Box{{1.0}}, FractionalOrder(1.9), {2});
  EXPECT_LT(rel(a19(0, 0), oracle::box1d_S11_a1p9), 1e-8);
  EXPECT_LT(rel(a19(1, 1), oracle::box1d_S22_a1p9), 1e-8);
  const Eigen::MatrixXd a15 = classical_stiffness(Box{{1.0}}, FractionalOrder(1.5), {3});
  EXPECT_LT(rel(a15(0, 0), oracle::box1d_S11_a1p5), 1e-8);
  EXPECT_LT(rel(a15(1, 1), oracle::box1d_S22_a1p5), 1e-8);
  EXPECT_LT(rel(a15(0, 2), oracle::box1d_S13_a1p5), 1e-8);
  EXPECT_EQ(a15(0, 1), 0.0);
  const Eigen::MatrixXd a10 = classical_stiffness(Box{{1.0}}, FractionalOrder(1.0), {2});
  EXPECT_LT(rel(a10(0, 0), oracle::box1d_S11_a1p0), 1e-8);
  const Eigen::MatrixXd l2 = classical_stiffness(Box{{2.0}}, FractionalOrder(0.7), {4});
  EXPECT_LT(rel(l2(1, 3), oracle::box1d_S24_L2_a0p7), 1e-8);
}

TEST(Stiffness, SelfConvergence) {
  for (double a : {0.5, 1.3, 1.9}) {
    const Box box{{1.0, 0.7}};
    const Eigen::MatrixXd base = classical_stiffness(box, FractionalOrder(a), {4, 4});
    const ResolvedKQuadrature rk = resolve({}, box, {4, 4});
    KQuadrature fine;
    fine.K_max = 2.0 * rk.K_max;
    fine.h_k = 0.5 * pi / box.max_length();
    const Eigen::MatrixXd finer = classical_stiffness(box, FractionalOrder(a), {4, 4}, fine);
    EXPECT_LT((finer - base).cwiseAbs().maxCoeff() / base.cwiseAbs().maxCoeff(), 1e-6) << a;
  }
}

TEST(Stiffness, TailMatters) {
  KQuadrature no_tail;
  no_tail.tail = false;
  const Eigen::MatrixXd with = classical_stiffness(Box{{1.0}}, FractionalOrder(1.5), {2});
  const Eigen::MatrixXd without = classical_stiffness(Box{{1.0}}, FractionalOrder(1.5), {2}, no_tail);
  EXPECT_LT(without(0, 0), with(0, 0));
}

TEST(ClassicalGap, AlphaTwoEqualsLocal) {
  const auto c = solve_classical_gap(Box{{1.0}}, FractionalOrder(2.0), ZeroPotential{}, {8});
  EXPECT_NEAR(c.report.E1, pi2, 1e-5 * pi2);
  EXPECT_NEAR(c.report.E2, 4.0 * pi2, 1e-5 * pi2);
  EXPECT_NEAR(c.report.delta, 3.0 * pi2, 1e-5 * 3.0 * pi2);
  const auto l = solve_local_gap(Box{{1.0, 0.6}}, AnalyticBoxBasis{{4, 4}}, FractionalOrder(2.0), QuadraticPotential{{1.0, 2.0}, {}});
  const auto c2 = solve_classical_gap(Box{{1.0, 0.6}}, FractionalOrder(2.0), QuadraticPotential{{1.0, 2.0}, {}}, {4, 4});
  // same ordering of modes is not guaranteed; compare spectra
  for (int i = 0; i < 4; ++i) EXPECT_LT(rel(c2.spectrum.eigenvalues(i), l.spectrum.eigenvalues(i)), 1e-6);
}

TEST(ClassicalGap, PotentialRaisesGroundState) {
  const Box box{{1.0, 0.8}};
  const auto free = solve_classical_gap(box, FractionalOrder(1.2), ZeroPotential{}, {6, 6});
  const auto with = solve_classical_gap(box, FractionalOrder(1.2), QuadraticPotential{{2.0, 5.0}, {0.5, 0.4}}, {6, 6});
  EXPECT_GE(with.report.E1, free.report.E1);
}

TEST(ClassicalGap, ScalingLaw) {
  const FractionalOrder a(1.4);
  const Box box{{1.6, 0.9}};
  const Potential v = QuadraticPotential{{0.7, 1.2}, {0.8, 0.45}};
  const auto full = solve_classical_gap(box, a, v, {8, 8});
  const auto unit = rescale_to_unit_diameter(box, v, a);
  const auto scaled = solve_classical_gap(std::get<Box>(unit.domain), a, unit.potential, {8, 8});
  EXPECT_LT(rel(full.report.delta, scaled.report.delta / std::pow(unit.scale, a.value())), 1e-6);
}

TEST(ClassicalGap, BoundsAttached) {
  const auto r = solve_classical_gap(Box{{1.0}}, FractionalOrder(1.5), ZeroPotential{}, {16});
  ASSERT_NE(r.report.bound(BoundName::ConjII_dirichlet), nullptr);
  ASSERT_NE(r.report.bound(BoundName::ConjI_local), nullptr);
  EXPECT_GT(r.report.bound(BoundName::ConjII_dirichlet)->margin, 0.0);
}

TEST(ClassicalGap, AgreesWithFiniteDifference) {
  const auto g = solve_classical_gap(Box{{1.0}}, FractionalOrder(1.0), ZeroPotential{}, {24});
  const Eigen::MatrixXd fd = fd_fractional_1d(FractionalOrder(1.0), 1.0, 1.0 / 1024, ZeroPotential{});
  const auto dec = symmetric_eigen(fd);
  EXPECT_LT(rel(dec.values(0), g.report.E1), 1e-2);
}

TEST(ClassicalBounds, Formulas) {
  EXPECT_NEAR(classical_gap_lower_bound(1, 2.0, {1.0, 1.0}), 2.0 * pi2, 1e-12);
  EXPECT_NEAR(classical_gap_lower_bound(2, 1.0, {2.0, 1.0}), pi / 8.0, 1e-14);
  EXPECT_LT(classical_gap_lower_bound(1, 1e-8, {1.0, 1.0}), 1e-7);
}

TEST(FractionalDifference, DiscreteSymbol) {
  // with h = 1 the stencil's symbol is |2 sin(theta/2)|^alpha
  for (double a : {0.5, 1.0, 1.5}) {
    const Eigen::MatrixXd m = fd_fractional_1d(FractionalOrder(a), 1024.0, 1.0, ZeroPotential{});
    for (double theta : {0.5, 1.0, 2.0}) {
      double s = m(0, 0);
      for (Eigen::Index j = 1; j < m.cols(); ++j) s += 2.0 * m(0, j) * std::cos(j * theta);
      EXPECT_NEAR(s, std::pow(2.0 * std::sin(0.5 * theta), a), 2e-4) << a << " " << theta;
    }
  }
}

TEST(FractionalDifference, SymbolApproachesMultiplier) {
  const double h = 1.0 / 256, k = 5.0;
  for (double a : {0.5, 1.5}) EXPECT_LT(rel(std::pow(2.0 * std::sin(0.5 * k * h) / h, a), std::pow(k, a)), 1e-3);
}

TEST(FractionalDifference, LaplacianLimit) {
  const double h = 0.1;
  const Eigen::MatrixXd m = fd_fractional_1d(FractionalOrder(2.0 - 1e-9), 1.0, h, ZeroPotential{});
  EXPECT_NEAR(m(0, 0) * h * h, 2.0, 1e-7);
  EXPECT_NEAR(m(0, 1) * h * h, -1.0, 1e-7);
  EXPECT_NEAR(m(0, 2) * h * h, 0.0, 1e-7);
}

TEST(FractionalDifference, DiagonalDominance) {
  const Eigen::MatrixXd m = fd_fractional_1d(FractionalOrder(1.0), 1.0, 1.0 / 64, ZeroPotential{});
  EXPECT_GT(m(0, 0), 0.0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    EXPECT_GE(m.row(i).sum(), 0.0);
    EXPECT_GE(m(i, i), m.row(i).cwiseAbs().sum() - m(i, i));
  }
}

TEST(FractionalDifference, RejectsBadInput) {
  EXPECT_THROW(fd_fractional_1d(FractionalOrder(2.0), 1.0, 0.1, ZeroPotential{}), DomainError);
  EXPECT_THROW(fd_fractional_1d(FractionalOrder(1.0), 1.0, 0.3, ZeroPotential{}), DomainError);
}
