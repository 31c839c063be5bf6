#pragma once

// Dense and sparse symmetric eigensolvers with a fixed eigenvector sign convention.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "fracgap/error.hpp"

namespace fracgap {

struct EigenDecomposition {
  Eigen::VectorXd values;   ///< ascending
  Eigen::MatrixXd vectors;  ///< orthonormal columns
};

/// Flips each column so that its first entry of largest magnitude is positive.
inline void apply_sign_convention(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::fabs(vectors(r, c));
      if (a > best * (1.0 + 1e-12)) {
        best = a;
        arg = r;
      }
    }
    if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

inline double max_asymmetry(const Eigen::MatrixXd& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

/// Full eigendecomposition of a dense symmetric matrix (Householder tridiagonalization
/// followed by implicit symmetric QR iteration).
inline EigenDecomposition symmetric_eigen(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw SolverError("symmetric_eigen: matrix must be square and non-empty");
  if (!h.allFinite()) throw SolverError("symmetric_eigen: matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw SolverError("symmetric_eigen: QR iteration did not converge");
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  apply_sign_convention(out.vectors);
  return out;
}

struct SparseEigenOptions {
  int extra_vectors = 8;      ///< block size is k + max(extra_vectors, k)
  double tol = 1e-10;         ///< residual tolerance relative to max(|theta|, 1)
  int max_iterations = 1000;
  double shift = 0.0;         ///< must lie strictly below the spectrum
  std::uint32_t seed = 20190817u;
  Eigen::Index dense_cutoff = 400;  ///< below this size the dense solver is used
};

/// The k smallest eigenpairs of a sparse symmetric matrix whose spectrum lies above
/// `opts.shift`: block inverse iteration on (A - shift I) with Rayleigh-Ritz projection.
inline EigenDecomposition smallest_eigenpairs(const Eigen::SparseMatrix<double>& a, int k,
                                              const SparseEigenOptions& opts = {}) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || n == 0) throw SolverError("smallest_eigenpairs: matrix must be square and non-empty");
  if (k < 1 || k > n) throw SolverError("smallest_eigenpairs: requested count out of range");

  if (n <= opts.dense_cutoff) {
    auto full = symmetric_eigen(Eigen::MatrixXd(a));
    return {full.values.head(k), full.vectors.leftCols(k)};
  }

  Eigen::SparseMatrix<double> id(n, n);
  id.setIdentity();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor;
  factor.analyzePattern(a);
  // factorizes A - s I; false when s is not below the spectrum (a non-positive pivot)
  auto factorize = [&](double s) {
    factor.factorize(a - s * id);
    return factor.info() == Eigen::Success && (factor.vectorD().array() > 0.0).all();
  };
  double shift = opts.shift;
  if (!factorize(shift)) throw SolverError("smallest_eigenpairs: shift is not below the spectrum");

  const Eigen::Index p = std::min<Eigen::Index>(n, k + std::max(opts.extra_vectors, k));
  std::mt19937 gen(opts.seed);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index c = 0; c < p; ++c)
    for (Eigen::Index r = 0; r < n; ++r) x(r, c) = static_cast<double>(gen()) / 4294967296.0 - 0.5;

  Eigen::VectorXd theta;
  bool reshifted = false;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    Eigen::MatrixXd y = factor.solve(x);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    y = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    const Eigen::MatrixXd ay = a * y;
    Eigen::MatrixXd t = y.transpose() * ay;
    t = 0.5 * (t + t.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
    theta = small.eigenvalues();
    x = y * small.eigenvectors();
    const Eigen::MatrixXd ax = ay * small.eigenvectors();

    bool converged = true;
    for (int i = 0; i < k && converged; ++i) {
      const double res = (ax.col(i) - theta(i) * x.col(i)).norm();
      converged = res <= opts.tol * std::max(std::fabs(theta(i)), 1.0);
    }
    if (converged) {
      EigenDecomposition out{theta.head(k), x.leftCols(k)};
      apply_sign_convention(out.vectors);
      return out;
    }
    // Once the lowest Ritz pair is roughly converged, move the shift up towards it. Some
    // eigenvalue lies within the residual norm of theta_0; a failed factorization (an
    // eigenvalue below the trial shift) halves the step.
    const double r0 = (ax.col(0) - theta(0) * x.col(0)).norm();
    if (!reshifted && r0 <= 1e-3 * std::max(std::fabs(theta(0)), 1.0)) {
      reshifted = true;
      double trial = shift + 0.9 * (theta(0) - r0 - shift);
      bool ok = false;
      for (int attempt = 0; attempt < 6 && trial > shift; ++attempt) {
        if ((ok = factorize(trial))) break;
        trial = 0.5 * (shift + trial);
      }
      if (ok)
        shift = trial;
      else if (!factorize(shift))
        throw SolverError("smallest_eigenpairs: refactorization failed");
    }
  }
  std::ostringstream os;
  os << "smallest_eigenpairs: no convergence after " << opts.max_iterations << " iterations";
  throw SolverError(os.str());
}

}  // namespace fracgap
