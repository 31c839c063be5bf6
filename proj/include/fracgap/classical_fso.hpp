#pragma once

// Classical (zero-extension) fractional Schrodinger operator on a box: sine-Galerkin with
// the stiffness computed as a Fourier-space integral, plus a finite-difference oracle in 1D.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "fracgap/bounds.hpp"
#include "fracgap/eigensolve.hpp"
#include "fracgap/galerkin.hpp"
#include "fracgap/geometry.hpp"
#include "fracgap/local_fso.hpp"
#include "fracgap/quadrature.hpp"
#include "fracgap/spectrum.hpp"
#include "fracgap/specfun.hpp"

namespace fracgap {

/// Truncated k-space rule. K_max <= 0 and h_k <= 0 select defaults:
/// K_max = max(200, 2 max M) pi / min L, h_k = pi / max L (panel width on the longest axis).
struct KQuadrature {
  double K_max = 0.0;
  double h_k = 0.0;
  bool tail = true;
  int nodes_per_panel = 10;
  int grading_levels = 40;
};

namespace detail {

// sin(x)/x with a Taylor branch near 0
inline double sinc(double x) {
  if (std::fabs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return std::sin(x) / x;
}

}  // namespace detail

/// Fourier transform int_0^L sqrt(2/L) sin(m pi x / L) e^{-ikx} dx of the zero-extended mode.
/// Written as -i sqrt(2/L) a L sinc(eps L/2) e^{-i eps L/2} / (k + a) with a = m pi / L and
/// eps = k - a, which is regular at k = a; k < 0 uses conjugate symmetry.
inline std::complex<double> sine_mode_fourier_transform(int m, double L, double k) {
  if (m < 1 || !(L > 0.0)) throw DomainError("sine_mode_fourier_transform: requires m >= 1 and L > 0");
  if (k < 0.0) return std::conj(sine_mode_fourier_transform(m, L, -k));
  const double a = m * std::numbers::pi / L;
  const double eps = k - a;
  const std::complex<double> phase = std::polar(1.0, -0.5 * eps * L);
  return std::complex<double>(0.0, -1.0) * (std::sqrt(2.0 / L) * a * L * detail::sinc(0.5 * eps * L) / (k + a)) *
         phase;
}

namespace detail {

// Real factor f_m with Re(phi_m conj(phi_n)) = f_m f_n for k >= 0 and m, n of equal parity
// (the product vanishes identically when the parities differ).
inline double folded_mode(int m, double L, double k) {
  const double a = m * std::numbers::pi / L;
  const double sign = (m / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::sqrt(2.0 * L) * a * sinc(0.5 * (k - a) * L) / (k + a);
}

// int_K^inf k^g e^{iLk} dk by repeated integration by parts (asymptotic in 1/(LK)).
inline std::complex<double> oscillatory_tail(double g, double L, double K) {
  const std::complex<double> iL(0.0, L);
  const std::complex<double> e = std::polar(1.0, L * K);
  std::complex<double> sum = 0.0, coeff = 1.0;
  double power = std::pow(K, g);
  for (int r = 0; r < 12; ++r) {
    const std::complex<double> term = -coeff * power * e / iL;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    coeff *= -(g - r) / iL;
    power /= K;
  }
  return sum;
}

// int_K^inf k^beta f_m f_n dk for equal parity, using
// f_m f_n = (4ab/L) (1 - s cos kL) / ((k^2-a^2)(k^2-b^2)) and the expansion
// 1/((k^2-a^2)(k^2-b^2)) = sum_j e_j k^{-4-2j}.
inline double mode_pair_tail(int m, int n, double L, double K, double beta) {
  const double pi = std::numbers::pi;
  const double a = m * pi / L, b = n * pi / L;
  const double s = m % 2 == 0 ? 1.0 : -1.0;
  const double a2 = a * a, b2 = b * b;
  double total = 0.0;
  double e = 1.0;  // e_j = sum_{i<=j} a^{2i} b^{2(j-i)}
  double a_pow = 1.0;
  for (int j = 0; j < 200; ++j) {
    const double g = beta - 4.0 - 2.0 * j;
    const double smooth = std::pow(K, g + 1.0) / (-(g + 1.0));
    const double osc = oscillatory_tail(g, L, K).real();
    const double term = e * (smooth - s * osc);
    total += term;
    if (j > 2 && std::fabs(term) <= 1e-17 * std::fabs(total)) break;
    a_pow *= a2;
    e = e * b2 + a_pow;
  }
  return 4.0 * a * b / L * total;
}

struct AxisRule {
  quad::Rule rule;
  Eigen::MatrixXd f;  // f(q, m-1) = folded_mode(m, L, k_q)
};

inline AxisRule axis_rule(double L, int M, double K, double h, const KQuadrature& kq) {
  AxisRule r{quad::graded_half_line(K, h, kq.nodes_per_panel, kq.grading_levels), {}};
  r.f.resize(static_cast<Eigen::Index>(r.rule.size()), M);
  for (std::size_t q = 0; q < r.rule.size(); ++q)
    for (int m = 1; m <= M; ++m) r.f(static_cast<Eigen::Index>(q), m - 1) = folded_mode(m, L, r.rule.x[q]);
  return r;
}

}  // namespace detail

struct ResolvedKQuadrature {
  double K_max;
  std::vector<double> panel_width;  ///< per axis
  bool tail;
};

inline ResolvedKQuadrature resolve(const KQuadrature& kq, const Box& box, const std::vector<int>& modes_per_dim) {
  const double pi = std::numbers::pi;
  const int max_modes = *std::max_element(modes_per_dim.begin(), modes_per_dim.end());
  ResolvedKQuadrature r;
  r.K_max = kq.K_max > 0.0 ? kq.K_max : std::max(200, 2 * max_modes) * pi / box.min_length();
  const double h = kq.h_k > 0.0 ? kq.h_k : pi / box.max_length();
  for (double L : box.lengths) r.panel_width.push_back(h * box.max_length() / L);
  r.tail = kq.tail;
  const double top = max_modes * pi / box.min_length();
  if (!(r.K_max > top)) throw DomainError("KQuadrature: K_max must exceed the largest mode frequency");
  return r;
}

/// S_mn = (2 pi)^{-n} int |k|^alpha Re(phi_m conj(phi_n)) dk over tensor sine modes (first axis slowest).
inline Eigen::MatrixXd classical_stiffness(const Box& box, FractionalOrder alpha, const std::vector<int>& modes_per_dim,
                                           const KQuadrature& kq = {}) {
  validate(Domain{box});
  const std::size_t n = box.dim();
  if (n > 2) throw DomainError("classical_stiffness: only n = 1, 2 are supported");
  if (modes_per_dim.size() != n) throw DomainError("classical_stiffness: one mode count per dimension required");
  const ResolvedKQuadrature rk = resolve(kq, box, modes_per_dim);
  const double pi = std::numbers::pi;
  const double a = alpha.value();
  const double K = rk.K_max;

  if (n == 1) {
    const int M = modes_per_dim[0];
    const double L = box.lengths[0];
    const auto ax = detail::axis_rule(L, M, K, rk.panel_width[0], kq);
    Eigen::VectorXd w(static_cast<Eigen::Index>(ax.rule.size()));
    for (std::size_t q = 0; q < ax.rule.size(); ++q) w(static_cast<Eigen::Index>(q)) = ax.rule.w[q] * std::pow(ax.rule.x[q], a) / pi;
    Eigen::MatrixXd s = ax.f.transpose() * w.asDiagonal() * ax.f;
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) {
        if ((i + j) % 2 != 0) {
          s(i, j) = 0.0;
        } else if (rk.tail) {
          s(i, j) += detail::mode_pair_tail(i + 1, j + 1, L, K, a) / pi;
        }
      }
    return 0.5 * (s + s.transpose());
  }

  // n = 2: S = pi^{-2} int_{k1,k2 > 0} |k|^alpha P1(k1) P2(k2), P = f_m f_n per axis.
  const int M1 = modes_per_dim[0], M2 = modes_per_dim[1];
  const auto ax1 = detail::axis_rule(box.lengths[0], M1, K, rk.panel_width[0], kq);
  const auto ax2 = detail::axis_rule(box.lengths[1], M2, K, rk.panel_width[1], kq);
  struct Pair {
    int m, n;
  };
  auto pairs_of = [](int M) {
    std::vector<Pair> p;
    for (int i = 1; i <= M; ++i)
      for (int j = 1; j <= M; ++j)
        if ((i + j) % 2 == 0) p.push_back({i, j});
    return p;
  };
  const auto p1 = pairs_of(M1), p2 = pairs_of(M2);
  const auto Q1 = static_cast<Eigen::Index>(ax1.rule.size()), Q2 = static_cast<Eigen::Index>(ax2.rule.size());
  Eigen::MatrixXd G1(Q1, static_cast<Eigen::Index>(p1.size())), G2(Q2, static_cast<Eigen::Index>(p2.size()));
  for (std::size_t c = 0; c < p1.size(); ++c)
    G1.col(static_cast<Eigen::Index>(c)) = ax1.f.col(p1[c].m - 1).cwiseProduct(ax1.f.col(p1[c].n - 1));
  for (std::size_t c = 0; c < p2.size(); ++c)
    G2.col(static_cast<Eigen::Index>(c)) = ax2.f.col(p2[c].m - 1).cwiseProduct(ax2.f.col(p2[c].n - 1));
  Eigen::MatrixXd W(Q1, Q2);
  for (Eigen::Index i = 0; i < Q1; ++i)
    for (Eigen::Index j = 0; j < Q2; ++j) {
      const double k1 = ax1.rule.x[static_cast<std::size_t>(i)], k2 = ax2.rule.x[static_cast<std::size_t>(j)];
      W(i, j) = ax1.rule.w[static_cast<std::size_t>(i)] * ax2.rule.w[static_cast<std::size_t>(j)] *
                std::pow(k1 * k1 + k2 * k2, 0.5 * a);
    }
  Eigen::MatrixXd core = G1.transpose() * W * G2;  // (pairs1 x pairs2)

  if (rk.tail) {
    // strip k1 > K (all k2): |k|^a ~ k1^a + (a/2) k1^{a-2} k2^2, and the k2 integrals over (0, inf)
    // are pi delta and pi b^2 delta by Parseval. Strip k2 > K, k1 <= K: same with roles swapped,
    // the k1 moments taken from the truncated rule.
    Eigen::VectorXd J0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p1.size()));
    Eigen::VectorXd J2 = J0;
    for (std::size_t c = 0; c < p1.size(); ++c)
      for (Eigen::Index q = 0; q < Q1; ++q) {
        const double k = ax1.rule.x[static_cast<std::size_t>(q)];
        const double v = ax1.rule.w[static_cast<std::size_t>(q)] * G1(q, static_cast<Eigen::Index>(c));
        J0(static_cast<Eigen::Index>(c)) += v;
        J2(static_cast<Eigen::Index>(c)) += v * k * k;
      }
    const double L1 = box.lengths[0], L2 = box.lengths[1];
    for (std::size_t c1 = 0; c1 < p1.size(); ++c1) {
      const auto [m1, n1] = p1[c1];
      const double t0 = detail::mode_pair_tail(m1, n1, L1, K, a);
      const double t2 = detail::mode_pair_tail(m1, n1, L1, K, a - 2.0);
      for (std::size_t c2 = 0; c2 < p2.size(); ++c2) {
        const auto [m2, n2] = p2[c2];
        double add = 0.0;
        if (m2 == n2) {
          const double b = m2 * pi / L2;
          add += t0 * pi + 0.5 * a * t2 * pi * b * b;
        }
        const double u0 = detail::mode_pair_tail(m2, n2, L2, K, a);
        const double u2 = detail::mode_pair_tail(m2, n2, L2, K, a - 2.0);
        add += u0 * J0(static_cast<Eigen::Index>(c1)) + 0.5 * a * u2 * J2(static_cast<Eigen::Index>(c1));
        core(static_cast<Eigen::Index>(c1), static_cast<Eigen::Index>(c2)) += add;
      }
    }
  }

  const auto modes = tensor_modes(modes_per_dim);
  const auto N = static_cast<Eigen::Index>(modes.size());
  auto pair_col = [](int M, int m, int nn) {
    // index of (m, nn) in pairs_of(M)
    int c = 0;
    for (int i = 1; i <= M; ++i)
      for (int j = 1; j <= M; ++j)
        if ((i + j) % 2 == 0) {
          if (i == m && j == nn) return c;
          ++c;
        }
    return -1;
  };
  std::vector<int> col1(static_cast<std::size_t>(M1 * M1), -1), col2(static_cast<std::size_t>(M2 * M2), -1);
  for (int i = 1; i <= M1; ++i)
    for (int j = 1; j <= M1; ++j) col1[static_cast<std::size_t>((i - 1) * M1 + j - 1)] = pair_col(M1, i, j);
  for (int i = 1; i <= M2; ++i)
    for (int j = 1; j <= M2; ++j) col2[static_cast<std::size_t>((i - 1) * M2 + j - 1)] = pair_col(M2, i, j);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index r = 0; r < N; ++r)
    for (Eigen::Index c = 0; c < N; ++c) {
      const auto& mr = modes[static_cast<std::size_t>(r)];
      const auto& mc = modes[static_cast<std::size_t>(c)];
      const int a1 = col1[static_cast<std::size_t>((mr[0] - 1) * M1 + mc[0] - 1)];
      const int a2 = col2[static_cast<std::size_t>((mr[1] - 1) * M2 + mc[1] - 1)];
      if (a1 >= 0 && a2 >= 0) s(r, c) = core(a1, a2) / (pi * pi);
    }
  return 0.5 * (s + s.transpose());
}

inline Eigen::MatrixXd assemble_classical_hamiltonian(const Box& box, FractionalOrder alpha,
                                                      const std::vector<int>& modes_per_dim, const Potential& potential,
                                                      const KQuadrature& kq = {}, int quad_extra = 8) {
  Eigen::MatrixXd h = classical_stiffness(box, alpha, modes_per_dim, kq);
  if (!is_zero(potential)) {
    Eigen::MatrixXd v = sine_potential_matrix(box, tensor_modes(modes_per_dim), potential, quad_extra);
    symmetrize_checked(v, 1e-10, "assemble_classical_hamiltonian");
    h += v;
  }
  return h;
}

inline std::string describe_modes(const std::vector<int>& m) {
  std::ostringstream os;
  for (std::size_t j = 0; j < m.size(); ++j) os << (j ? "x" : "") << m[j];
  return os.str();
}

/// Builds the result from an assembled classical Hamiltonian (used by the well study too).
inline SolveResult classical_result_from(Eigen::MatrixXd h, const Box& box, FractionalOrder alpha,
                                         const Potential& potential, const std::vector<int>& modes_per_dim,
                                         const KQuadrature& kq) {
  SolveResult r;
  r.hamiltonian = std::move(h);
  const EigenDecomposition dec = symmetric_eigen(r.hamiltonian);
  const ResolvedKQuadrature rk = resolve(kq, box, modes_per_dim);
  Metadata meta{{"basis", "sine"},
                {"modes_per_dim", describe_modes(modes_per_dim)},
                {"K_max", format_real(rk.K_max)},
                {"h_k", format_real(rk.panel_width[0])},
                {"tail", rk.tail ? "1" : "0"}};
  r.spectrum = Spectrum{dec.values, dec.vectors, "sine", std::move(meta)};
  r.report = gap_from_eigenvalues(dec.values);
  attach_bounds(r.report,
                evaluate_bounds({ProblemKind::Classical, static_cast<int>(box.dim()), alpha.value(), diameters(box)}));
  r.report.config_echo = {{"problem", "classical"},
                          {"domain", describe(box)},
                          {"alpha", format_real(alpha.value())},
                          {"potential", kind_name(potential)}};
  return r;
}

inline SolveResult solve_classical_gap(const Box& box, FractionalOrder alpha, const Potential& potential,
                                       const std::vector<int>& modes_per_dim, const KQuadrature& kq = {}) {
  validate(potential);
  return classical_result_from(assemble_classical_hamiltonian(box, alpha, modes_per_dim, potential, kq), box, alpha,
                               potential, modes_per_dim, kq);
}

/// Fractional centered-difference matrix on the interior nodes x_i = i h of (0, L), zero
/// extension outside: A_ij = h^{-alpha} g_{|i-j|}, plus the potential sampled on the diagonal.
inline Eigen::MatrixXd fd_fractional_1d(FractionalOrder alpha, double L, double h, const Potential& potential) {
  const double a = alpha.value();
  if (!(a < 2.0)) throw DomainError("fd_fractional_1d: requires alpha < 2");
  const double ratio = L / h;
  const long steps = std::lround(ratio);
  if (steps < 2 || std::fabs(ratio - steps) > 1e-9 * ratio) throw DomainError("fd_fractional_1d: h must divide L");
  const auto n = static_cast<Eigen::Index>(steps - 1);
  std::vector<double> g(static_cast<std::size_t>(n));
  g[0] = specfun::gamma(a + 1.0) / std::pow(specfun::gamma(0.5 * a + 1.0), 2);
  for (std::size_t j = 0; j + 1 < g.size(); ++j) g[j + 1] = (1.0 - (a + 1.0) / (0.5 * a + j + 1.0)) * g[j];
  const double scale = std::pow(h, -a);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = scale * g[static_cast<std::size_t>(std::abs(i - j))];
  if (!is_zero(potential))
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = (i + 1) * h;
      m(i, i) += evaluate(potential, std::span<const double>(&x, 1));
    }
  return m;
}

}  // namespace fracgap
