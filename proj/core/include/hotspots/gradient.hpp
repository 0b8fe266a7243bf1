#pragma once

// Gradient recovery for P1 fields: per-element constant gradients plus
// area-weighted nodal averages, and directional derivative fields along
// constant or rotational vector fields.

#include <Eigen/Dense>

#include "hotspots/mesh.hpp"
#include "hotspots/specfun.hpp"

namespace hotspots {

struct RecoveredGradient {
  std::vector<Point> element;  // constant gradient per triangle
  Eigen::VectorXd nodal_x, nodal_y;

  Point at_node(int n) const { return {nodal_x[n], nodal_y[n]}; }
  double max_norm() const;
};

RecoveredGradient recover_gradient(const Eigen::VectorXd& nodal_field,
                                   const Mesh& mesh);

inline RecoveredGradient recover_gradient(const EigenPair& eig, const Mesh& mesh) {
  return recover_gradient(eig.u, mesh);
}

/// Nodal scalar field Xu from the recovered gradient.
Eigen::VectorXd directional_field(const RecoveredGradient& g, const Mesh& mesh,
                                  const DerivativeFieldSpec& x);

/// Element-wise Xu evaluated at barycenters (from element gradients).
std::vector<double> directional_field_elements(const RecoveredGradient& g,
                                               const Mesh& mesh,
                                               const DerivativeFieldSpec& x);

}  // namespace hotspots
