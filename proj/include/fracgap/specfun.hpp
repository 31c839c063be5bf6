#pragma once

// Special functions used by the closed-form spectra and asymptotic gap formulas.

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracgap/error.hpp"

namespace fracgap::specfun {

/// Truncation control for hypergeometric partial sums.
struct SeriesControl {
  double rel_tol = 1e-15;
  int max_terms = 500;

  void validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("SeriesControl.rel_tol must be > 0");
    if (max_terms < 1) throw DomainError("SeriesControl.max_terms must be >= 1");
  }
};

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

/// Gamma function; throws DomainError at the poles 0, -1, -2, ...
inline double gamma(double x) {
  if (std::isnan(x)) throw DomainError("gamma: NaN argument");
  if (is_nonpositive_integer(x)) {
    std::ostringstream os;
    os << "gamma: pole at non-positive integer " << x;
    throw DomainError(os.str());
  }
  return std::tgamma(x);
}

namespace detail {

// Sums sum_k t_k with t_{k+1} = t_k * ratio(k). Stops after two consecutive terms
// fall below rel_tol * |partial sum|, so one accidental zero term cannot end it.
template <class Ratio>
double hypergeometric_series(Ratio ratio, const SeriesControl& ctrl, const char* name) {
  ctrl.validate();
  long double sum = 1.0L;
  long double term = 1.0L;
  int small_in_a_row = 0;
  for (int k = 0; k < ctrl.max_terms; ++k) {
    term *= ratio(k);
    sum += term;
    if (std::fabs(term) <= ctrl.rel_tol * std::fabs(sum)) {
      if (++small_in_a_row == 2) return static_cast<double>(sum);
    } else {
      small_in_a_row = 0;
    }
  }
  std::ostringstream os;
  os << name << ": series did not converge within " << ctrl.max_terms << " terms";
  throw ConvergenceError(os.str());
}

}  // namespace detail

/// Generalized hypergeometric 1F2(a; b1, b2; z). Entire in z.
inline double hyp1f2(double a, double b1, double b2, double z, const SeriesControl& ctrl = {}) {
  if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2))
    throw DomainError("hyp1f2: lower parameter is a non-positive integer");
  const long double la = a, lb1 = b1, lb2 = b2, lz = z;
  return detail::hypergeometric_series(
      [&](int k) {
        const long double kk = k;
        return (la + kk) / ((lb1 + kk) * (lb2 + kk)) * lz / (kk + 1.0L);
      },
      ctrl, "hyp1f2");
}

/// Gauss hypergeometric 2F1(a, b; c; z) for |z| < 1 (no analytic continuation).
inline double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctrl = {}) {
  if (is_nonpositive_integer(c)) throw DomainError("hyp2f1: c is a non-positive integer");
  if (!(std::fabs(z) < 1.0)) throw DomainError("hyp2f1: requires |z| < 1");
  const long double la = a, lb = b, lc = c, lz = z;
  return detail::hypergeometric_series(
      [&](int k) {
        const long double kk = k;
        return (la + kk) * (lb + kk) / (lc + kk) * lz / (kk + 1.0L);
      },
      ctrl, "hyp2f1");
}

/// Normalizing constant C_{n,alpha} of the singular-integral fractional Laplacian,
/// 2^a Gamma((n+a)/2) / (pi^{n/2} |Gamma(-a/2)|), for 0 < alpha < 2.
///
/// Evaluated in the equivalent form a Gamma((n+a)/2) / (2^{1-a} pi^{n/2} Gamma(1-a/2)),
/// which stays finite and accurate near both ends of the interval.
inline double frac_laplacian_constant(int n, double alpha) {
  if (n < 1 || n > 3) throw DomainError("frac_laplacian_constant: n must be 1, 2 or 3");
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("frac_laplacian_constant: alpha must lie in (0,2); alpha = 2 is the ordinary Laplacian");
  const double pi = std::numbers::pi;
  return alpha * gamma(0.5 * (n + alpha)) /
         (std::pow(2.0, 1.0 - alpha) * std::pow(pi, 0.5 * n) * gamma(1.0 - 0.5 * alpha));
}

}  // namespace fracgap::specfun
