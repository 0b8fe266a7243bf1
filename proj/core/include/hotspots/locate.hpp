#pragma once

// Uniform-grid point location and P1 interpolation over a mesh.

#include <Eigen/Dense>
#include <optional>

#include "hotspots/mesh.hpp"

namespace hotspots {

class MeshLocator {
 public:
  explicit MeshLocator(const Mesh& mesh);

  struct Hit {
    int triangle = -1;
    std::array<double, 3> bary{};
  };

  /// Containing triangle with barycentric coordinates, or nullopt if p lies
  /// outside the mesh (beyond a small relative tolerance).
  std::optional<Hit> locate(Point p) const;

  /// P1 interpolation of a nodal field; nullopt outside the mesh.
  std::optional<double> eval(const Eigen::VectorXd& nodal, Point p) const;

  const Mesh& mesh() const { return *mesh_; }

 private:
  const Mesh* mesh_;
  Point lo_, hi_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> cells_;

  int cell_of(double x, double y) const;
};

}  // namespace hotspots
