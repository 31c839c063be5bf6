#pragma once

// Closed-form and quadrature approximations of eigenvalues and gaps for alpha near 2.

#include <cmath>
#include <numbers>
#include <utility>

#include "fracgap/classical_fso.hpp"
#include "fracgap/error.hpp"
#include "fracgap/quadrature.hpp"
#include "fracgap/specfun.hpp"

namespace fracgap {

struct EigenPair2 {
  double E1 = 0.0;
  double E2 = 0.0;
};

namespace detail {

inline bool near_sec_pole(double alpha) { return std::fabs(alpha - 1.0) < 1e-3; }

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0,2]");
}

// E_l on (0,1) from the sine mode l: (1/pi) int_0^inf k^alpha f_l(k)^2 dk, adaptive on
// half-period panels up to K plus the analytic tail.
inline double box1d_mode_energy(int l, double alpha) {
  const double pi = std::numbers::pi;
  const double K = 400.0 * pi;
  double sum = 0.0;
  auto f = [&](double k) {
    const double v = folded_mode(l, 1.0, k);
    return k == 0.0 ? 0.0 : std::pow(k, alpha) * v * v;
  };
  for (int p = 0; p < 400; ++p) sum += quad::adaptive(f, p * pi, (p + 1) * pi, 1e-13);
  sum += mode_pair_tail(l, l, 1.0, K, alpha);
  return sum / pi;
}

inline double box1d_prefactor(double alpha) {
  const double pi = std::numbers::pi;
  return std::pow(pi, 2.5) / std::cos(0.5 * alpha * pi) /
         (specfun::gamma(2.0 - 0.5 * alpha) * specfun::gamma(0.5 * (5.0 - alpha)));
}

inline double box1d_F(double alpha, double z) {
  return specfun::hyp1f2(2.0, 2.0 - 0.5 * alpha, 2.5 - 0.5 * alpha, z);
}

}  // namespace detail

/// E1, E2 on (0,1) with the alpha = 2 sine modes as trial states. The E2 closed form carries a
/// leading minus sign so that E2(2) = 4 pi^2. Near alpha = 1 the sec(alpha pi / 2) pole makes the
/// closed form indeterminate and the defining integral is evaluated directly.
inline EigenPair2 eigs_box1d_asymptotic(double alpha) {
  detail::check_alpha(alpha);
  if (detail::near_sec_pole(alpha)) return {detail::box1d_mode_energy(1, alpha), detail::box1d_mode_energy(2, alpha)};
  const double pi = std::numbers::pi;
  const double p = detail::box1d_prefactor(alpha);
  return {std::pow(2.0, alpha - 2.0) * p * detail::box1d_F(alpha, -pi * pi / 4.0),
          -std::pow(2.0, alpha) * p * detail::box1d_F(alpha, -pi * pi)};
}

inline double gap_box1d_asymptotic(double alpha) {
  detail::check_alpha(alpha);
  if (detail::near_sec_pole(alpha)) {
    const auto e = eigs_box1d_asymptotic(alpha);
    return e.E2 - e.E1;
  }
  const double pi = std::numbers::pi;
  return -2.0 * pi * pi / specfun::gamma(4.0 - alpha) / std::cos(0.5 * alpha * pi) *
         (4.0 * detail::box1d_F(alpha, -pi * pi) + detail::box1d_F(alpha, -pi * pi / 4.0));
}

/// Energies of the sine modes (1,1) and (2,1) on (0,1) x (0,L).
inline EigenPair2 eigs_box2d_asymptotic(double alpha, double L, const KQuadrature& kq = {}) {
  detail::check_alpha(alpha);
  if (!(L > 0.0 && L <= 1.0)) throw DomainError("eigs_box2d_asymptotic: L must lie in (0,1]");
  const Eigen::MatrixXd s = classical_stiffness(Box{{1.0, L}}, FractionalOrder(alpha), {2, 1}, kq);
  return {s(0, 0), s(1, 1)};
}

/// E1, E2 for V = gamma^2 x^2 with the alpha = 2 Hermite states as trial states.
inline EigenPair2 eigs_harmonic1d_asymptotic(double alpha, double gamma) {
  detail::check_alpha(alpha);
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  const double sp = std::sqrt(std::numbers::pi);
  const double ga = std::pow(gamma, 0.5 * alpha);
  return {0.5 * gamma + ga / sp * specfun::gamma(0.5 * (1.0 + alpha)),
          1.5 * gamma + 2.0 * ga / sp * specfun::gamma(0.5 * (3.0 + alpha))};
}

inline double gap_harmonic1d_asymptotic(double alpha, double gamma) {
  detail::check_alpha(alpha);
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  return gamma + alpha * std::pow(gamma, 0.5 * alpha) / std::sqrt(std::numbers::pi) *
                     specfun::gamma(0.5 * (1.0 + alpha));
}

/// Gap for V = x^2 + eta^2 y^2 with the alpha = 2 states as trial states:
/// 1 + (1/(pi sqrt eta)) iint (2k1^2 - 1) |k|^alpha exp(-(k1^2 + k2^2/eta)) dk.
/// After k2 = sqrt(eta) u and polar coordinates the radial integrals are Gamma values and the
/// angular ones are periodic, so the trapezoid rule converges geometrically.
inline double gap_harmonic2d_asymptotic(double alpha, double eta) {
  detail::check_alpha(alpha);
  if (!(eta >= 1.0)) throw DomainError("eta must be >= 1");
  const double pi = std::numbers::pi;
  auto angular = [&](int N) {
    double a0 = 0.0, a2 = 0.0;
    for (int i = 0; i < N; ++i) {
      const double t = 2.0 * pi * i / N;
      const double c2 = std::cos(t) * std::cos(t);
      const double g = std::pow(c2 + eta * (1.0 - c2), 0.5 * alpha);
      a0 += g;
      a2 += c2 * g;
    }
    return std::pair<double, double>{a0 * 2.0 * pi / N, a2 * 2.0 * pi / N};
  };
  auto value = [&](int N) {
    const auto [a0, a2] = angular(N);
    return 1.0 + (specfun::gamma(0.5 * alpha + 2.0) * a2 - 0.5 * specfun::gamma(0.5 * alpha + 1.0) * a0) / pi;
  };
  int N = 64;
  double prev = value(N);
  for (int it = 0; it < 12; ++it) {
    N *= 2;
    const double next = value(N);
    if (std::fabs(next - prev) <= 1e-14 * std::fabs(next)) return next;
    prev = next;
  }
  throw ConvergenceError("gap_harmonic2d_asymptotic: angular quadrature did not converge");
}

}  // namespace fracgap
