#include "hotspots/eigensolve.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace hotspots {

double rayleigh_quotient(const SparseSymMatrix& k, const SparseSymMatrix& m,
                         const Eigen::VectorXd& x) {
  return x.dot(k.eigen() * x) / x.dot(m.eigen() * x);
}

namespace {

double rel_residual(const Eigen::SparseMatrix<double>& K,
                    const Eigen::SparseMatrix<double>& M, const Eigen::VectorXd& x,
                    double lambda) {
  double xm = std::sqrt(x.dot(M * x));
  return (K * x - lambda * (M * x)).norm() / std::max(1e-300, lambda * xm);
}

}  // namespace

std::pair<double, Eigen::VectorXd> smallest_eigenpair_reduced(
    const SparseSymMatrix& k_ff, const SparseSymMatrix& m_ff,
    const EigenSolveOptions& opts, double* residual_out, int* iters_out) {
  const auto& K = k_ff.eigen();
  const auto& M = m_ff.eigen();
  const int n = static_cast<int>(K.rows());
  if (n == 0) throw SolveError("empty system");

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(K);
  if (chol.info() != Eigen::Success)
    throw SolveError("stiffness factorization failed (dim=" + std::to_string(n) +
                     ", nnz=" + std::to_string(k_ff.nnz()) + ")");

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  x /= std::sqrt(x.dot(M * x));
  double lambda = rayleigh_quotient(k_ff, m_ff, x);
  double res = rel_residual(K, M, x, lambda);
  int it = 0;
  bool rq_phase = false;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;  // for shifted solves

  while (res > opts.tol && it < opts.max_iter) {
    ++it;
    if (!rq_phase) {
      x = chol.solve(M * x);
      x /= std::sqrt(x.dot(M * x));
      lambda = rayleigh_quotient(k_ff, m_ff, x);
      res = rel_residual(K, M, x, lambda);
      if (res < 1e-3) rq_phase = true;
    } else {
      Eigen::SparseMatrix<double> shifted = K - lambda * M;
      lu.compute(shifted);
      if (lu.info() != Eigen::Success) {
        // Shift landed on a Ritz value; nudge and retry once.
        shifted = K - (lambda * (1.0 + 1e-10) + 1e-300) * M;
        lu.compute(shifted);
        if (lu.info() != Eigen::Success)
          throw SolveError("shifted factorization failed");
      }
      Eigen::VectorXd y = lu.solve(M * x);
      y /= std::sqrt(y.dot(M * y));
      double lam_y = rayleigh_quotient(k_ff, m_ff, y);
      double res_y = rel_residual(K, M, y, lam_y);
      if (res_y >= res) break;  // stagnated at numerical floor
      x = y;
      lambda = lam_y;
      res = res_y;
    }
  }
  if (res > std::max(opts.tol, 1e-8))
    throw SolveError("eigensolve did not converge: residual " + std::to_string(res) +
                     " after " + std::to_string(it) + " iterations");
  if (residual_out) *residual_out = res;
  if (iters_out) *iters_out = it;
  return {lambda, x};
}

EigenPair smallest_eigenpair(const SparseSymMatrix& k, const SparseSymMatrix& m,
                             const DofMap& dofs, const EigenSolveOptions& opts) {
  SparseSymMatrix kf = restrict_matrix(k, dofs);
  SparseSymMatrix mf = restrict_matrix(m, dofs);
  EigenPair out;
  Eigen::VectorXd xr;
  std::tie(out.lambda1, xr) = smallest_eigenpair_reduced(kf, mf, opts, &out.residual,
                                                         &out.iterations);
  // Fix the sign: the M-weighted mean must be positive.
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(xr.size());
  if (ones.dot(mf.eigen() * xr) < 0) xr = -xr;
  out.u = dofs.extend_vector(xr);
  double umax = out.u.maxCoeff();
  out.positive = out.u.minCoeff() >= -1e-8 * std::max(umax, 1e-300);
  return out;
}

SecondEigenvalue second_eigenvalue_estimate(const SparseSymMatrix& k,
                                            const SparseSymMatrix& m,
                                            const DofMap& dofs,
                                            const EigenPair& first,
                                            const EigenSolveOptions& opts) {
  SparseSymMatrix kf = restrict_matrix(k, dofs);
  SparseSymMatrix mf = restrict_matrix(m, dofs);
  const auto& K = kf.eigen();
  const auto& M = mf.eigen();
  const int n = static_cast<int>(K.rows());

  Eigen::VectorXd u1 = dofs.restrict_vector(first.u);
  u1 /= std::sqrt(u1.dot(M * u1));

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(K);
  if (chol.info() != Eigen::Success) throw SolveError("factorization failed");

  // Deterministic start with a sign pattern u1 cannot absorb.
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = (i % 2 == 0) ? 1.0 : -1.0;
  auto deflate = [&](Eigen::VectorXd& v) { v -= u1.dot(M * v) * u1; };
  deflate(x);
  x /= std::sqrt(std::max(1e-300, x.dot(M * x)));

  double lambda = rayleigh_quotient(kf, mf, x);
  double res = 1.0;
  int it = 0;
  while (it < opts.max_iter) {
    ++it;
    x = chol.solve(M * x);
    deflate(x);
    x /= std::sqrt(std::max(1e-300, x.dot(M * x)));
    lambda = rayleigh_quotient(kf, mf, x);
    res = rel_residual(K, M, x, lambda);
    if (res <= std::max(opts.tol, 1e-9)) break;
  }
  if (res > 1e-6)
    throw SolveError("second eigenvalue iteration did not converge");
  SecondEigenvalue out;
  out.lambda2 = lambda;
  out.gap = lambda - first.lambda1;
  out.deflation_overlap = std::abs(x.dot(M * u1));
  return out;
}

}  // namespace hotspots
