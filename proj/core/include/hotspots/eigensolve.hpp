#pragma once

// Smallest eigenpair of the restricted generalized problem K x = lambda M x:
// shift-invert inverse iteration at shift 0 backed by a sparse symmetric
// factorization, with Rayleigh-quotient acceleration near convergence.

#include <Eigen/Dense>

#include "hotspots/assembly.hpp"

namespace hotspots {

struct EigenPair {
  double lambda1 = 0.0;
  Eigen::VectorXd u;  // nodal values over ALL mesh nodes, zeros where constrained
  double residual = 0.0;
  int iterations = 0;
  bool positive = false;  // nodal values >= -1e-8 * max(u)
};

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EigenSolveOptions {
  double tol = 1e-10;  // relative residual ||K u - l M u|| <= tol * l * ||u||_M-ish
  int max_iter = 400;
};

/// k, m are the FULL matrices; the Dirichlet constraint is applied through
/// dofs by elimination. The sign is fixed so the M-weighted mean of u is
/// positive.
EigenPair smallest_eigenpair(const SparseSymMatrix& k, const SparseSymMatrix& m,
                             const DofMap& dofs,
                             const EigenSolveOptions& opts = {});

/// Reduced-space variant (matrices already restricted); returns the reduced
/// eigenvector.
std::pair<double, Eigen::VectorXd> smallest_eigenpair_reduced(
    const SparseSymMatrix& k_ff, const SparseSymMatrix& m_ff,
    const EigenSolveOptions& opts, double* residual_out = nullptr,
    int* iters_out = nullptr);

struct SecondEigenvalue {
  double lambda2 = 0.0;
  double gap = 0.0;              // lambda2 - lambda1
  double deflation_overlap = 0;  // |u2' M u1| in the reduced space
};

SecondEigenvalue second_eigenvalue_estimate(const SparseSymMatrix& k,
                                            const SparseSymMatrix& m,
                                            const DofMap& dofs,
                                            const EigenPair& first,
                                            const EigenSolveOptions& opts = {});

double rayleigh_quotient(const SparseSymMatrix& k, const SparseSymMatrix& m,
                         const Eigen::VectorXd& x);

}  // namespace hotspots
