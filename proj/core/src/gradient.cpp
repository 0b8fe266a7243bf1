#include "hotspots/gradient.hpp"

namespace hotspots {

double RecoveredGradient::max_norm() const {
  double m = 0;
  for (const auto& g : element) m = std::max(m, norm(g));
  return m;
}

RecoveredGradient recover_gradient(const Eigen::VectorXd& nodal_field,
                                   const Mesh& mesh) {
  RecoveredGradient out;
  out.element.resize(mesh.triangles.size());
  Eigen::VectorXd wx = Eigen::VectorXd::Zero(mesh.nodes.size());
  Eigen::VectorXd wy = Eigen::VectorXd::Zero(mesh.nodes.size());
  Eigen::VectorXd wsum = Eigen::VectorXd::Zero(mesh.nodes.size());
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    Point p0 = mesh.nodes[tr[0]], p1 = mesh.nodes[tr[1]], p2 = mesh.nodes[tr[2]];
    double area2 = cross(p1 - p0, p2 - p0);
    Point g[3] = {perp(p2 - p1), perp(p0 - p2), perp(p1 - p0)};
    Point grad{0, 0};
    for (int i = 0; i < 3; ++i)
      grad = grad + (nodal_field[tr[i]] / area2) * g[i];
    out.element[t] = grad;
    double area = 0.5 * area2;
    for (int i = 0; i < 3; ++i) {
      wx[tr[i]] += area * grad.x;
      wy[tr[i]] += area * grad.y;
      wsum[tr[i]] += area;
    }
  }
  out.nodal_x = wx.cwiseQuotient(wsum);
  out.nodal_y = wy.cwiseQuotient(wsum);
  return out;
}

Eigen::VectorXd directional_field(const RecoveredGradient& g, const Mesh& mesh,
                                  const DerivativeFieldSpec& x) {
  Eigen::VectorXd out(mesh.nodes.size());
  for (size_t n = 0; n < mesh.nodes.size(); ++n) {
    Point d = x.direction_at(mesh.nodes[n]);
    out[n] = d.x * g.nodal_x[n] + d.y * g.nodal_y[n];
  }
  return out;
}

std::vector<double> directional_field_elements(const RecoveredGradient& g,
                                               const Mesh& mesh,
                                               const DerivativeFieldSpec& x) {
  std::vector<double> out(mesh.triangles.size());
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    Point d = x.direction_at(mesh.centroid(static_cast<int>(t)));
    out[t] = dot(d, g.element[t]);
  }
  return out;
}

}  // namespace hotspots
