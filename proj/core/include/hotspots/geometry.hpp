#pragma once

// Planar domains with mixed Dirichlet/Neumann boundary labels: polygons,
// graph domains bounded below by the x-axis, and the vertex bookkeeping
// (interior angles, D/N/mixed classification) that the rest of the
// pipeline keys off.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hotspots {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point normalized(Point p) {
  double n = norm(p);
  return n > 0 ? Point{p.x / n, p.y / n} : Point{0, 0};
}
// 90-degree counterclockwise rotation.
inline Point perp(Point p) { return {-p.y, p.x}; }

enum class Condition { Dirichlet, Neumann };
enum class DomainKind { Polygon, GraphDomain };
enum class VertexType { NeumannVertex, DirichletVertex, MixedVertex };

struct BoundaryArc {
  std::vector<Point> polyline;  // >= 2 points, consecutive points distinct
  Condition condition = Condition::Dirichlet;
  std::string arc_id;
};

/// Closed counterclockwise loop of labeled arcs. Construct through
/// make_domain(), which validates and merges collinear same-label points.
struct PlanarDomainSpec {
  std::vector<BoundaryArc> arcs;
  DomainKind kind = DomainKind::Polygon;

  std::vector<Point> loop() const;  // closed: front() repeated at back()
  double area() const;              // shoelace, positive for ccw
  int arc_index(const std::string& arc_id) const;
};

struct VertexInfo {
  int id = -1;
  Point position;
  double angle_beta = 0.0;  // interior angle in (0, 2pi)
  VertexType vtype = VertexType::NeumannVertex;
  double nu = 0.0;  // pi / angle_beta
  // Directions of the two incident boundary edges, pointing away from the
  // vertex. prev_dir is along the incoming arc reversed, next_dir along the
  // outgoing arc; interior sector sweeps ccw from next_dir to prev_dir.
  Point prev_dir, next_dir;
  Condition prev_condition = Condition::Dirichlet;
  Condition next_condition = Condition::Dirichlet;

  // Leading radial exponent of the eigenfunction at this vertex:
  // nu for pure Neumann/Dirichlet corners, nu/2 for mixed corners.
  double singular_exponent() const {
    return vtype == VertexType::MixedVertex ? 0.5 * nu : nu;
  }
};

/// One straight piece of the boundary loop with its label and, when an
/// endpoint is a corner of the spec, the corner's vertex id.
struct BoundarySegment {
  Point a, b;
  Condition condition = Condition::Dirichlet;
  int arc_index = -1;
  int vertex_a = -1;  // VertexInfo id at endpoint a, -1 if not a corner
  int vertex_b = -1;
};

/// Piecewise-linear graph-domain profile f on [a,b]: f >= 0, f > 0 at all
/// interior breakpoints.
struct GraphFunction {
  std::vector<double> x;  // strictly increasing, size >= 2
  std::vector<double> y;

  double a() const { return x.front(); }
  double b() const { return x.back(); }
  bool zero_at_a() const { return y.front() == 0.0; }
  bool zero_at_b() const { return y.back() == 0.0; }
  double eval(double xq) const;
  void validate() const;  // throws std::invalid_argument
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PlanarDomainSpec make_domain(std::vector<BoundaryArc> arcs,
                             DomainKind kind = DomainKind::Polygon);

std::vector<VertexInfo> classify_vertices(const PlanarDomainSpec& spec);

/// Flattened labeled segments of the loop, ccw, with vertex ids attached.
std::vector<BoundarySegment> boundary_segments(const PlanarDomainSpec& spec);
std::vector<BoundarySegment> boundary_segments(
    const PlanarDomainSpec& spec, const std::vector<VertexInfo>& vertices);

PlanarDomainSpec graph_domain_from_function(const GraphFunction& f);

/// (strict local extrema of f with f > 0) + (maximal flat intervals).
/// Finite for every piecewise-linear profile.
int count_bound_n(const GraphFunction& f);

enum class AngleClass { Acute, Right, Obtuse };

struct TriangleSpec {
  PlanarDomainSpec spec;
  std::vector<int> dirichlet_edges;  // which of edges (p0p1, p1p2, p2p0)
  // For a single Dirichlet edge: the vertex opposite to it (the Neumann
  // vertex) and its angle class. For two Dirichlet edges: the class of the
  // two vertices adjacent to the Neumann edge.
  int neumann_vertex = -1;           // index into {p0,p1,p2}, -1 if D has 2 edges
  AngleClass neumann_vertex_class = AngleClass::Acute;
  std::vector<AngleClass> n_adjacent_classes;
  std::array<Point, 3> corners{};
  std::array<double, 3> angles{};    // interior angles at p0, p1, p2
};

TriangleSpec triangle_spec(Point p0, Point p1, Point p2,
                           const std::vector<int>& dirichlet_edges);

// Brute-force simplicity test of a closed loop (used both at load time and
// as an oracle in tests).
bool loop_is_simple(const std::vector<Point>& closed_loop);

bool segments_properly_intersect(Point a, Point b, Point c, Point d);

}  // namespace hotspots
