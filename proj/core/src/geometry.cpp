#include "hotspots/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace hotspots {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCollinearTol = 1e-12;  // relative to segment scale

double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

bool on_segment(Point a, Point b, Point p) {
  if (std::abs(orient(a, b, p)) >
      kCollinearTol * std::max(1.0, dist(a, b) * dist(a, b)))
    return false;
  return std::min(a.x, b.x) - 1e-14 <= p.x && p.x <= std::max(a.x, b.x) + 1e-14 &&
         std::min(a.y, b.y) - 1e-14 <= p.y && p.y <= std::max(a.y, b.y) + 1e-14;
}

}  // namespace

bool segments_properly_intersect(Point a, Point b, Point c, Point d) {
  double d1 = orient(c, d, a);
  double d2 = orient(c, d, b);
  double d3 = orient(a, b, c);
  double d4 = orient(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool loop_is_simple(const std::vector<Point>& closed_loop) {
  if (closed_loop.size() < 4) return false;  // triangle = 3 distinct + repeat
  size_t n = closed_loop.size() - 1;         // last point repeats the first
  for (size_t i = 0; i < n; ++i) {
    Point a = closed_loop[i], b = closed_loop[i + 1];
    for (size_t j = i + 1; j < n; ++j) {
      Point c = closed_loop[j], d = closed_loop[j + 1];
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (segments_properly_intersect(a, b, c, d)) return false;
      if (!adjacent) {
        // Non-adjacent segments may not touch at all.
        if (on_segment(a, b, c) || on_segment(a, b, d) ||
            on_segment(c, d, a) || on_segment(c, d, b))
          return false;
      }
    }
  }
  return true;
}

std::vector<Point> PlanarDomainSpec::loop() const {
  std::vector<Point> out;
  for (const auto& arc : arcs)
    for (size_t i = 0; i + 1 < arc.polyline.size(); ++i)
      out.push_back(arc.polyline[i]);
  if (!out.empty()) out.push_back(out.front());
  return out;
}

double PlanarDomainSpec::area() const {
  auto lp = loop();
  double s = 0;
  for (size_t i = 0; i + 1 < lp.size(); ++i) s += cross(lp[i], lp[i + 1]);
  return 0.5 * s;
}

int PlanarDomainSpec::arc_index(const std::string& arc_id) const {
  for (size_t i = 0; i < arcs.size(); ++i)
    if (arcs[i].arc_id == arc_id) return static_cast<int>(i);
  return -1;
}

PlanarDomainSpec make_domain(std::vector<BoundaryArc> arcs, DomainKind kind) {
  if (arcs.size() < 2) throw DomainError("domain needs at least two arcs");
  bool has_d = false, has_n = false;
  for (size_t i = 0; i < arcs.size(); ++i) {
    auto& arc = arcs[i];
    if (arc.polyline.size() < 2)
      throw DomainError("arc " + arc.arc_id + " has fewer than 2 points");
    for (size_t k = 0; k + 1 < arc.polyline.size(); ++k)
      if (dist(arc.polyline[k], arc.polyline[k + 1]) == 0.0)
        throw DomainError("arc " + arc.arc_id + " repeats a point");
    if (arc.arc_id.empty()) arc.arc_id = "arc" + std::to_string(i);
    (arc.condition == Condition::Dirichlet ? has_d : has_n) = true;
  }
  if (!has_d) throw DomainError("Dirichlet part is empty");
  if (!has_n) throw DomainError("Neumann part is empty");

  // Arcs must chain head-to-tail into one closed loop.
  for (size_t i = 0; i < arcs.size(); ++i) {
    const auto& cur = arcs[i].polyline;
    const auto& nxt = arcs[(i + 1) % arcs.size()].polyline;
    if (dist(cur.back(), nxt.front()) != 0.0)
      throw DomainError("arcs do not chain into a closed loop");
  }

  // Merge collinear same-condition interior points: a straight junction is
  // not a vertex. Label changes are kept even at angle pi.
  for (auto& arc : arcs) {
    std::vector<Point>& pl = arc.polyline;
    std::vector<Point> kept;
    kept.push_back(pl.front());
    for (size_t k = 1; k + 1 < pl.size(); ++k) {
      Point u = pl[k] - kept.back(), v = pl[k + 1] - pl[k];
      double scale = std::max(norm(u) * norm(v), 1e-300);
      if (std::abs(cross(u, v)) <= 1e-12 * scale && dot(u, v) > 0) continue;
      kept.push_back(pl[k]);
    }
    kept.push_back(pl.back());
    pl = std::move(kept);
  }

  PlanarDomainSpec spec{std::move(arcs), kind};
  auto lp = spec.loop();
  if (spec.area() <= 0) throw DomainError("loop is not counterclockwise");
  if (!loop_is_simple(lp)) throw DomainError("loop self-intersects");

  if (kind == DomainKind::GraphDomain) {
    int n_neumann = 0;
    for (const auto& arc : spec.arcs)
      if (arc.condition == Condition::Neumann) {
        ++n_neumann;
        for (const auto& p : arc.polyline)
          if (p.y != 0.0)
            throw DomainError("graph-domain Neumann arc must lie on y=0");
      }
    if (n_neumann != 1)
      throw DomainError("graph domain needs exactly one Neumann arc");
  }
  return spec;
}

std::vector<VertexInfo> classify_vertices(const PlanarDomainSpec& spec) {
  // Corner points of the loop with the labels of both incident segments.
  struct Seg {
    Point a, b;
    Condition cond;
  };
  std::vector<Seg> segs;
  for (const auto& arc : spec.arcs)
    for (size_t i = 0; i + 1 < arc.polyline.size(); ++i)
      segs.push_back({arc.polyline[i], arc.polyline[i + 1], arc.condition});

  std::vector<VertexInfo> out;
  size_t n = segs.size();
  for (size_t i = 0; i < n; ++i) {
    const Seg& prev = segs[(i + n - 1) % n];
    const Seg& next = segs[i];
    Point v = next.a;
    Point din = normalized(prev.b - prev.a);   // incoming direction
    Point dout = normalized(next.b - next.a);  // outgoing
    if (norm(prev.b - prev.a) == 0 || norm(next.b - next.a) == 0)
      throw DomainError("zero-length edge at vertex");
    // Interior angle for a ccw loop: pi minus the signed turn.
    double turn = std::atan2(cross(din, dout), dot(din, dout));
    double beta = kPi - turn;
    if (beta <= 0) beta += 2 * kPi;
    if (beta >= 2 * kPi) beta -= 2 * kPi;
    // Straight same-label junctions were merged in make_domain; a remaining
    // angle-pi point is a label change (an endpoint of the Dirichlet closure)
    // and is a genuine vertex of the sector decomposition.
    VertexInfo info;
    info.id = static_cast<int>(out.size());
    info.position = v;
    info.angle_beta = beta;
    info.nu = kPi / beta;
    info.prev_dir = {-din.x, -din.y};
    info.next_dir = dout;
    info.prev_condition = prev.cond;
    info.next_condition = next.cond;
    if (prev.cond == next.cond)
      info.vtype = prev.cond == Condition::Neumann ? VertexType::NeumannVertex
                                                   : VertexType::DirichletVertex;
    else
      info.vtype = VertexType::MixedVertex;
    out.push_back(info);
  }
  return out;
}

std::vector<BoundarySegment> boundary_segments(const PlanarDomainSpec& spec) {
  return boundary_segments(spec, classify_vertices(spec));
}

std::vector<BoundarySegment> boundary_segments(
    const PlanarDomainSpec& spec, const std::vector<VertexInfo>& vertices) {
  auto vertex_at = [&](Point p) -> int {
    for (const auto& v : vertices)
      if (dist(v.position, p) == 0.0) return v.id;
    return -1;
  };
  std::vector<BoundarySegment> out;
  for (size_t ai = 0; ai < spec.arcs.size(); ++ai) {
    const auto& arc = spec.arcs[ai];
    for (size_t i = 0; i + 1 < arc.polyline.size(); ++i) {
      BoundarySegment s;
      s.a = arc.polyline[i];
      s.b = arc.polyline[i + 1];
      s.condition = arc.condition;
      s.arc_index = static_cast<int>(ai);
      s.vertex_a = vertex_at(s.a);
      s.vertex_b = vertex_at(s.b);
      out.push_back(s);
    }
  }
  return out;
}

double GraphFunction::eval(double xq) const {
  if (xq <= x.front()) return y.front();
  if (xq >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), xq);
  size_t i = static_cast<size_t>(it - x.begin());
  double t = (xq - x[i - 1]) / (x[i] - x[i - 1]);
  return (1 - t) * y[i - 1] + t * y[i];
}

void GraphFunction::validate() const {
  if (x.size() < 2 || x.size() != y.size())
    throw std::invalid_argument("graph function needs matching x/y, size >= 2");
  for (size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1]))
      throw std::invalid_argument("breakpoints must be strictly increasing");
  for (size_t i = 0; i < y.size(); ++i) {
    bool interior = i > 0 && i + 1 < y.size();
    if (y[i] < 0) throw std::invalid_argument("f must be nonnegative");
    if (interior && y[i] == 0.0)
      throw std::invalid_argument("f must be positive at interior breakpoints");
  }
  if (y.front() == 0.0 && y[1] == 0.0)
    throw std::invalid_argument("flat zero piece at left endpoint");
  if (y.back() == 0.0 && y[y.size() - 2] == 0.0)
    throw std::invalid_argument("flat zero piece at right endpoint");
}

PlanarDomainSpec graph_domain_from_function(const GraphFunction& f) {
  f.validate();
  std::vector<BoundaryArc> arcs;
  Point bl{f.a(), 0.0}, br{f.b(), 0.0};

  BoundaryArc base;
  base.polyline = {bl, br};
  base.condition = Condition::Neumann;
  base.arc_id = "base";
  arcs.push_back(base);

  if (!f.zero_at_b()) {
    BoundaryArc wall;
    wall.polyline = {br, Point{f.b(), f.y.back()}};
    wall.condition = Condition::Dirichlet;
    wall.arc_id = "right_wall";
    arcs.push_back(wall);
  }

  BoundaryArc graph;
  for (size_t i = f.x.size(); i-- > 0;)
    graph.polyline.push_back({f.x[i], f.y[i]});
  graph.condition = Condition::Dirichlet;
  graph.arc_id = "graph";
  arcs.push_back(graph);

  if (!f.zero_at_a()) {
    BoundaryArc wall;
    wall.polyline = {Point{f.a(), f.y.front()}, bl};
    wall.condition = Condition::Dirichlet;
    wall.arc_id = "left_wall";
    arcs.push_back(wall);
  }
  return make_domain(std::move(arcs), DomainKind::GraphDomain);
}

int count_bound_n(const GraphFunction& f) {
  f.validate();
  // Piecewise-linear semantics with exact value comparisons: a breakpoint is
  // a strict local extremum iff the nearest distinct values on both sides
  // (one side at the endpoints) lie strictly above or strictly below it.
  const auto& y = f.y;
  size_t m = y.size();
  int extrema = 0;
  for (size_t i = 0; i < m; ++i) {
    if (y[i] <= 0.0) continue;
    std::optional<double> left, right;
    for (size_t j = i; j-- > 0;)
      if (y[j] != y[i]) {
        left = y[j];
        break;
      }
    for (size_t j = i + 1; j < m; ++j)
      if (y[j] != y[i]) {
        right = y[j];
        break;
      }
    // Points inside a plateau (an equal neighbor) are not strict extrema.
    bool plateau = (i > 0 && y[i - 1] == y[i]) || (i + 1 < m && y[i + 1] == y[i]);
    if (plateau) continue;
    bool is_max = (!left || *left < y[i]) && (!right || *right < y[i]);
    bool is_min = (!left || *left > y[i]) && (!right || *right > y[i]);
    if (!left && !right) continue;  // constant function
    if (is_max || is_min) ++extrema;
  }
  int flats = 0;
  bool in_flat = false;
  for (size_t i = 0; i + 1 < m; ++i) {
    bool flat = y[i] == y[i + 1];
    if (flat && !in_flat) ++flats;
    in_flat = flat;
  }
  return extrema + flats;
}

TriangleSpec triangle_spec(Point p0, Point p1, Point p2,
                           const std::vector<int>& dirichlet_edges) {
  double twice_area = cross(p1 - p0, p2 - p0);
  double scale = std::max({dist(p0, p1), dist(p1, p2), dist(p2, p0)});
  if (std::abs(twice_area) <= 1e-12 * scale * scale)
    throw DomainError("degenerate (collinear) triangle");
  std::array<Point, 3> P{p0, p1, p2};
  bool swapped = twice_area < 0;
  if (swapped) std::swap(P[1], P[2]);  // force ccw

  std::vector<int> dedges = dirichlet_edges;
  if (swapped)
    for (int& e : dedges) e = 2 - e;  // edge (pi,pj) keeps its point pair
  std::sort(dedges.begin(), dedges.end());
  dedges.erase(std::unique(dedges.begin(), dedges.end()), dedges.end());
  for (int e : dedges)
    if (e < 0 || e > 2) throw DomainError("edge index out of range");
  if (dedges.empty() || dedges.size() > 2)
    throw DomainError("Dirichlet edges must be a nonempty proper subset");

  TriangleSpec out;
  out.corners = P;
  for (int i = 0; i < 3; ++i) {
    Point u = P[(i + 1) % 3] - P[i], v = P[(i + 2) % 3] - P[i];
    out.angles[i] = std::acos(std::clamp(dot(u, v) / (norm(u) * norm(v)), -1.0, 1.0));
  }
  auto classify = [](double ang) {
    const double tol = 1e-9;
    if (std::abs(ang - kPi / 2) <= tol) return AngleClass::Right;
    return ang < kPi / 2 ? AngleClass::Acute : AngleClass::Obtuse;
  };

  std::vector<BoundaryArc> arcs;
  for (int i = 0; i < 3; ++i) {
    BoundaryArc arc;
    arc.polyline = {P[i], P[(i + 1) % 3]};
    bool diri = std::find(dedges.begin(), dedges.end(), i) != dedges.end();
    arc.condition = diri ? Condition::Dirichlet : Condition::Neumann;
    arc.arc_id = "edge" + std::to_string(i);
    arcs.push_back(arc);
  }
  out.spec = make_domain(std::move(arcs), DomainKind::Polygon);
  out.dirichlet_edges = dedges;

  if (dedges.size() == 1) {
    // The vertex opposite the Dirichlet edge sits between the two Neumann
    // edges.
    int de = dedges[0];
    out.neumann_vertex = (de + 2) % 3;
    out.neumann_vertex_class = classify(out.angles[out.neumann_vertex]);
  } else {
    // One Neumann edge; report the classes of its two endpoints.
    int ne = 3 - dedges[0] - dedges[1];
    out.n_adjacent_classes = {classify(out.angles[ne]),
                              classify(out.angles[(ne + 1) % 3])};
  }
  return out;
}

}  // namespace hotspots
