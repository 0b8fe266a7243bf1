#include "hotspots/locate.hpp"

#include <algorithm>
#include <cmath>

namespace hotspots {

MeshLocator::MeshLocator(const Mesh& mesh) : mesh_(&mesh) {
  lo_ = {1e300, 1e300};
  hi_ = {-1e300, -1e300};
  for (const auto& p : mesh.nodes) {
    lo_.x = std::min(lo_.x, p.x);
    lo_.y = std::min(lo_.y, p.y);
    hi_.x = std::max(hi_.x, p.x);
    hi_.y = std::max(hi_.y, p.y);
  }
  int target = std::max(1, static_cast<int>(std::sqrt(mesh.triangles.size() / 2.0)));
  nx_ = ny_ = target;
  cells_.assign(static_cast<size_t>(nx_) * ny_, {});
  double wx = std::max(hi_.x - lo_.x, 1e-300), wy = std::max(hi_.y - lo_.y, 1e-300);
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (int k = 0; k < 3; ++k) {
      x0 = std::min(x0, mesh.nodes[tr[k]].x);
      x1 = std::max(x1, mesh.nodes[tr[k]].x);
      y0 = std::min(y0, mesh.nodes[tr[k]].y);
      y1 = std::max(y1, mesh.nodes[tr[k]].y);
    }
    int i0 = std::clamp(static_cast<int>((x0 - lo_.x) / wx * nx_), 0, nx_ - 1);
    int i1 = std::clamp(static_cast<int>((x1 - lo_.x) / wx * nx_), 0, nx_ - 1);
    int j0 = std::clamp(static_cast<int>((y0 - lo_.y) / wy * ny_), 0, ny_ - 1);
    int j1 = std::clamp(static_cast<int>((y1 - lo_.y) / wy * ny_), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        cells_[static_cast<size_t>(j) * nx_ + i].push_back(static_cast<int>(t));
  }
}

int MeshLocator::cell_of(double x, double y) const {
  double wx = std::max(hi_.x - lo_.x, 1e-300), wy = std::max(hi_.y - lo_.y, 1e-300);
  int i = std::clamp(static_cast<int>((x - lo_.x) / wx * nx_), 0, nx_ - 1);
  int j = std::clamp(static_cast<int>((y - lo_.y) / wy * ny_), 0, ny_ - 1);
  return j * nx_ + i;
}

std::optional<MeshLocator::Hit> MeshLocator::locate(Point p) const {
  if (p.x < lo_.x - 1e-12 || p.x > hi_.x + 1e-12 || p.y < lo_.y - 1e-12 ||
      p.y > hi_.y + 1e-12)
    return std::nullopt;
  const auto& mesh = *mesh_;
  const auto& cand = cells_[cell_of(p.x, p.y)];
  Hit best;
  double best_defect = 1e300;
  for (int t : cand) {
    const auto& tr = mesh.triangles[t];
    Point a = mesh.nodes[tr[0]], b = mesh.nodes[tr[1]], c = mesh.nodes[tr[2]];
    double area2 = cross(b - a, c - a);
    double l0 = cross(b - p, c - p) / area2;
    double l1 = cross(c - p, a - p) / area2;
    double l2 = cross(a - p, b - p) / area2;
    double defect = -std::min({l0, l1, l2});
    if (defect < best_defect) {
      best_defect = defect;
      best = {t, {l0, l1, l2}};
    }
  }
  if (best.triangle < 0 || best_defect > 1e-9) return std::nullopt;
  return best;
}

std::optional<double> MeshLocator::eval(const Eigen::VectorXd& nodal, Point p) const {
  auto hit = locate(p);
  if (!hit) return std::nullopt;
  const auto& tr = mesh_->triangles[hit->triangle];
  return hit->bary[0] * nodal[tr[0]] + hit->bary[1] * nodal[tr[1]] +
         hit->bary[2] * nodal[tr[2]];
}

}  // namespace hotspots
