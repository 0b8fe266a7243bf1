#pragma once

// Conforming triangulations of domain specs with geometric grading toward
// singular corners, plus uniform (red) refinement and boundary chain
// extraction. Meshing is deterministic: node order follows the spec order
// and the fixed refinement scan.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "hotspots/geometry.hpp"

namespace hotspots {

struct BoundaryEdge {
  int a = -1, b = -1;  // node ids, oriented ccw along the loop
  Condition condition = Condition::Dirichlet;
  int arc_index = -1;
  int vertex_a = -1;  // spec vertex id when the endpoint is a corner
  int vertex_b = -1;
};

struct Mesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> triangles;  // ccw node triples
  std::vector<BoundaryEdge> boundary_edges;
  double h_target = 0.0;

  std::vector<VertexInfo> vertices;  // spec corners
  std::vector<int> vertex_node;      // vertex id -> node id
  std::vector<std::string> arc_ids;  // arc_index -> arc id

  double total_area() const;
  double triangle_area(int t) const;
  Point centroid(int t) const;
  double triangle_diameter(int t) const;  // longest edge

  /// Throws MeshError if any structural invariant fails: positive areas,
  /// interior edges shared by exactly 2 triangles, boundary edges by 1.
  void validate() const;

  bool node_on_dirichlet_closure(int node) const;
};

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GradingPolicy {
  double ratio_q = 0.5;
  int depth = 0;  // 0 = derive from h at triangulate() time
  // Vertices with singular exponent below this get graded rings.
  double exponent_threshold = 1.0;

  static GradingPolicy standard() { return {}; }
  static GradingPolicy none() {
    GradingPolicy g;
    g.exponent_threshold = 0.0;
    return g;
  }
};

Mesh triangulate(const PlanarDomainSpec& spec, double h,
                 const GradingPolicy& grading = GradingPolicy::standard());

/// Midpoint 4-split of every triangle; labels inherited, h_target halved.
Mesh refine_uniform(const Mesh& mesh);

/// Ordered node path along one boundary arc, ccw with respect to the domain.
std::vector<int> boundary_chain(const Mesh& mesh, const std::string& arc_id);
std::vector<int> boundary_chain(const Mesh& mesh, int arc_index);

// CSV export/import: nodes.csv, triangles.csv, boundary_edges.csv.
void write_mesh_csv(const Mesh& mesh, const std::string& directory);
Mesh read_mesh_csv(const std::string& directory);

}  // namespace hotspots
