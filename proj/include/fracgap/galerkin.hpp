#pragma once

// Potential matrices in sine-product bases, shared by the local and classical solvers.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "fracgap/error.hpp"
#include "fracgap/geometry.hpp"
#include "fracgap/potential.hpp"
#include "fracgap/quadrature.hpp"

namespace fracgap {

/// Multi-index of a tensor sine mode, one entry per axis (entries >= 1).
using ModeIndex = std::vector<int>;

/// Modes with m_j in 1..M_j, first axis slowest.
inline std::vector<ModeIndex> tensor_modes(const std::vector<int>& modes_per_dim) {
  std::size_t total = 1;
  for (int m : modes_per_dim) {
    if (m < 1) throw DomainError("mode counts must be >= 1");
    total *= static_cast<std::size_t>(m);
  }
  std::vector<ModeIndex> out;
  out.reserve(total);
  const std::size_t n = modes_per_dim.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    ModeIndex idx(n);
    std::size_t rest = flat;
    for (std::size_t j = n; j-- > 0;) {
      idx[j] = static_cast<int>(rest % modes_per_dim[j]) + 1;
      rest /= modes_per_dim[j];
    }
    out.push_back(std::move(idx));
  }
  return out;
}

/// V_mn = int_box V u_m u_n for sine-product modes, by tensor Gauss-Legendre split at the
/// potential's breakpoints. `order_extra` nodes are added to 2*max index per axis.
inline Eigen::MatrixXd sine_potential_matrix(const Box& box, const std::vector<ModeIndex>& modes,
                                             const Potential& potential, int order_extra = 8) {
  const std::size_t n = box.dim();
  const auto N = static_cast<Eigen::Index>(modes.size());
  if (is_zero(potential) || N == 0) return Eigen::MatrixXd::Zero(N, N);
  validate(potential);

  std::vector<int> max_index(n, 1);
  for (const auto& m : modes)
    for (std::size_t j = 0; j < n; ++j) max_index[j] = std::max(max_index[j], m[j]);

  std::vector<quad::Rule> rules(n);
  std::vector<Eigen::MatrixXd> table(n);  // table[j](q, m-1) = sqrt(2/L) sin(m pi x_q / L)
  for (std::size_t j = 0; j < n; ++j) {
    const double L = box.lengths[j];
    rules[j] = quad::piecewise_gauss(0.0, L, breakpoints(potential, j, 0.0, L), 2 * max_index[j] + order_extra);
    table[j].resize(static_cast<Eigen::Index>(rules[j].size()), max_index[j]);
    for (std::size_t q = 0; q < rules[j].size(); ++q)
      for (int m = 1; m <= max_index[j]; ++m)
        table[j](static_cast<Eigen::Index>(q), m - 1) =
            std::sqrt(2.0 / L) * std::sin(m * std::numbers::pi * rules[j].x[q] / L);
  }

  std::size_t Q = 1;
  for (const auto& r : rules) Q *= r.size();
  Eigen::MatrixXd B(static_cast<Eigen::Index>(Q), N);
  Eigen::VectorXd wv(static_cast<Eigen::Index>(Q));
  std::vector<std::size_t> qi(n, 0);
  std::vector<double> x(n);
  for (std::size_t flat = 0; flat < Q; ++flat) {
    std::size_t rest = flat;
    double w = 1.0;
    for (std::size_t j = n; j-- > 0;) {
      qi[j] = rest % rules[j].size();
      rest /= rules[j].size();
      x[j] = rules[j].x[qi[j]];
      w *= rules[j].w[qi[j]];
    }
    wv(static_cast<Eigen::Index>(flat)) = w * evaluate(potential, x);
    for (Eigen::Index c = 0; c < N; ++c) {
      double b = 1.0;
      for (std::size_t j = 0; j < n; ++j) b *= table[j](static_cast<Eigen::Index>(qi[j]), modes[c][j] - 1);
      B(static_cast<Eigen::Index>(flat), c) = b;
    }
  }
  Eigen::MatrixXd v = B.transpose() * wv.asDiagonal() * B;
  return v;
}

/// Throws ResolutionError when the relative asymmetry of `m` exceeds tol, then symmetrizes.
inline void symmetrize_checked(Eigen::MatrixXd& m, double tol, const char* what) {
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw ResolutionError(std::string(what) + ": assembled matrix is not symmetric to tolerance");
  m = 0.5 * (m + m.transpose()).eval();
}

}  // namespace fracgap
