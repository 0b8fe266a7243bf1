#pragma once

// Zero-set tracing of P1 nodal fields (marching triangles): polyline arcs
// with classified endpoints. Exact nodal zeros are perturbed to the positive
// side, so every triangle is crossed by at most one segment and arcs never
// branch; junctions survive only as near-meeting distinct arcs.

#include <Eigen/Dense>

#include "hotspots/mesh.hpp"

namespace hotspots {

enum class ArcEnd { Loop, OnN, OnD, AtVertex, InteriorJunction };

struct NodalArc {
  std::vector<Point> points;
  ArcEnd start = ArcEnd::Loop, end = ArcEnd::Loop;
  int start_vertex = -1, end_vertex = -1;      // spec vertex id for AtVertex
  int start_arc_index = -1, end_arc_index = -1;  // boundary arc index for OnN/OnD
  double length() const;
};

struct NodalGraph {
  std::vector<NodalArc> arcs;
  bool degenerate = false;  // field below threshold everywhere
  double field_max = 0.0;
};

struct NodalGraphOptions {
  // Fields with max |value| at or below this are flagged degenerate.
  double degenerate_threshold = 0.0;
  // Arc endpoints within snap_factor * (local boundary edge length) of a
  // spec corner are classified AtVertex.
  double snap_factor = 0.5;
};

NodalGraph nodal_graph(const Eigen::VectorXd& field, const Mesh& mesh,
                       const NodalGraphOptions& opts = {});

/// Number of traced arcs with an endpoint at the given spec vertex.
int arcs_ending_at_vertex(const NodalGraph& graph, int vertex_id);

}  // namespace hotspots
