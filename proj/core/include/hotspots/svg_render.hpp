#pragma once

// Static SVG rendering of solutions: per-element heatmap, boundary outline
// with condition coloring, traced nodal arcs, critical point markers. Byte
// output is deterministic: fixed 6-significant-digit float formatting, no
// pointer- or hash-ordered iteration.

#include <Eigen/Dense>
#include <string>

#include "hotspots/critical_points.hpp"
#include "hotspots/nodal_graph.hpp"

namespace hotspots {

struct RenderOptions {
  double width_px = 640;
  bool draw_mesh_edges = false;
};

struct RenderOverlays {
  std::vector<NodalArc> arcs;
  std::vector<CriticalPoint> critical_points;
  std::vector<VertexExtremum> vertex_extrema;
};

std::string render_solution_svg(const Mesh& mesh, const Eigen::VectorXd& u,
                                const RenderOverlays& overlays = {},
                                const RenderOptions& opts = {});

/// Render from raw arrays (used by the file-based render subcommand).
std::string render_solution_svg(const std::vector<Point>& nodes,
                                const std::vector<std::array<int, 3>>& triangles,
                                const std::vector<BoundaryEdge>& boundary,
                                const Eigen::VectorXd& u,
                                const RenderOverlays& overlays = {},
                                const RenderOptions& opts = {});

}  // namespace hotspots
