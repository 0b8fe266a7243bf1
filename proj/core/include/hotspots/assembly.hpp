#pragma once

// Galerkin P1 assembly of the stiffness and mass forms, Dirichlet handling
// by elimination to the free degrees of freedom.

#include <Eigen/SparseCore>
#include <iosfwd>

#include "hotspots/mesh.hpp"

namespace hotspots {

/// Symmetric sparse matrix (both halves stored). Thin wrapper so the
/// assembly/eigensolve contract stays independent of the backing storage.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  explicit SparseSymMatrix(Eigen::SparseMatrix<double> m) : m_(std::move(m)) {}

  int dim() const { return static_cast<int>(m_.rows()); }
  long nnz() const { return static_cast<long>(m_.nonZeros()); }
  double coeff(int i, int j) const { return m_.coeff(i, j); }

  const Eigen::SparseMatrix<double>& eigen() const { return m_; }
  Eigen::SparseMatrix<double>& eigen() { return m_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return m_ * x; }
  double quadratic_form(const Eigen::VectorXd& x) const { return x.dot(m_ * x); }

  /// max |A - A^T| over stored entries.
  double symmetry_defect() const;

  /// Coordinate text format: one "row col value" line per stored entry.
  void write_coordinate(std::ostream& os) const;

 private:
  Eigen::SparseMatrix<double> m_;
};

enum class DofStatus { Free, Constrained };

struct DofMap {
  std::vector<DofStatus> status;  // per mesh node
  std::vector<int> free_index;    // node -> compact index, -1 if constrained
  std::vector<int> free_nodes;    // compact index -> node

  int free_count() const { return static_cast<int>(free_nodes.size()); }

  Eigen::VectorXd restrict_vector(const Eigen::VectorXd& full) const;
  Eigen::VectorXd extend_vector(const Eigen::VectorXd& reduced) const;
};

struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// K = integral of grad(phi_i) . grad(phi_j), M = integral of phi_i phi_j,
/// exact per-element formulas for linear elements. The Neumann condition is
/// natural and contributes nothing.
std::pair<SparseSymMatrix, SparseSymMatrix> assemble_stiffness_mass(const Mesh& mesh);

/// Constrains exactly the nodes on the closure of the Dirichlet part
/// (including arc endpoints shared with Neumann arcs).
DofMap build_dofmap(const Mesh& mesh);

SparseSymMatrix restrict_matrix(const SparseSymMatrix& a, const DofMap& dofs);

/// Diagnostic lumped mass: row sums of the consistent mass matrix.
Eigen::VectorXd lumped_mass(const SparseSymMatrix& mass);

}  // namespace hotspots
