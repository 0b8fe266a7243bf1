#include "hotspots/assembly.hpp"

#include <cstdio>
#include <ostream>
#include <vector>

namespace hotspots {

double SparseSymMatrix::symmetry_defect() const {
  Eigen::SparseMatrix<double> d = m_ - Eigen::SparseMatrix<double>(m_.transpose());
  double worst = 0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(d, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

void SparseSymMatrix::write_coordinate(std::ostream& os) const {
  char buf[96];
  for (int k = 0; k < m_.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m_, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value());
      os << buf;
    }
}

Eigen::VectorXd DofMap::restrict_vector(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(free_count());
  for (int i = 0; i < free_count(); ++i) out[i] = full[free_nodes[i]];
  return out;
}

Eigen::VectorXd DofMap::extend_vector(const Eigen::VectorXd& reduced) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(status.size());
  for (int i = 0; i < free_count(); ++i) out[free_nodes[i]] = reduced[i];
  return out;
}

std::pair<SparseSymMatrix, SparseSymMatrix> assemble_stiffness_mass(const Mesh& mesh) {
  const int n = static_cast<int>(mesh.nodes.size());
  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(mesh.triangles.size() * 9);
  mt.reserve(mesh.triangles.size() * 9);

  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    Point p0 = mesh.nodes[tr[0]], p1 = mesh.nodes[tr[1]], p2 = mesh.nodes[tr[2]];
    double area2 = cross(p1 - p0, p2 - p0);
    if (area2 <= 0) throw AssemblyError("zero or negative area element");
    double area = 0.5 * area2;
    // grad(phi_i) = perp(opposite edge) / (2 area), edges oriented ccw
    Point g[3] = {perp(p2 - p1), perp(p0 - p2), perp(p1 - p0)};
    for (int i = 0; i < 3; ++i) g[i] = (1.0 / area2) * g[i];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        kt.emplace_back(tr[i], tr[j], area * dot(g[i], g[j]));
        mt.emplace_back(tr[i], tr[j], area / 12.0 * (i == j ? 2.0 : 1.0));
      }
  }
  Eigen::SparseMatrix<double> K(n, n), M(n, n);
  K.setFromTriplets(kt.begin(), kt.end());
  M.setFromTriplets(mt.begin(), mt.end());
  return {SparseSymMatrix(std::move(K)), SparseSymMatrix(std::move(M))};
}

DofMap build_dofmap(const Mesh& mesh) {
  DofMap dofs;
  dofs.status.assign(mesh.nodes.size(), DofStatus::Free);
  for (const auto& e : mesh.boundary_edges)
    if (e.condition == Condition::Dirichlet) {
      dofs.status[e.a] = DofStatus::Constrained;
      dofs.status[e.b] = DofStatus::Constrained;
    }
  dofs.free_index.assign(mesh.nodes.size(), -1);
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    if (dofs.status[i] == DofStatus::Free) {
      dofs.free_index[i] = static_cast<int>(dofs.free_nodes.size());
      dofs.free_nodes.push_back(static_cast<int>(i));
    }
  if (dofs.free_nodes.empty()) throw AssemblyError("no free degrees of freedom");
  return dofs;
}

SparseSymMatrix restrict_matrix(const SparseSymMatrix& a, const DofMap& dofs) {
  if (a.dim() != static_cast<int>(dofs.status.size()))
    throw AssemblyError("dofmap/matrix dimension mismatch");
  std::vector<Eigen::Triplet<double>> tr;
  const auto& m = a.eigen();
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      int i = dofs.free_index[it.row()], j = dofs.free_index[it.col()];
      if (i >= 0 && j >= 0) tr.emplace_back(i, j, it.value());
    }
  Eigen::SparseMatrix<double> out(dofs.free_count(), dofs.free_count());
  out.setFromTriplets(tr.begin(), tr.end());
  return SparseSymMatrix(std::move(out));
}

Eigen::VectorXd lumped_mass(const SparseSymMatrix& mass) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mass.dim());
  const auto& m = mass.eigen();
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      out[it.row()] += it.value();
  return out;
}

}  // namespace hotspots
