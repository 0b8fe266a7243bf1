#include "hotspots/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace hotspots {

namespace {

// ---------------------------------------------------------------------------
// Incremental Delaunay triangulation (Bowyer-Watson) with a super-triangle.
// Indices are stable; removed triangles are tombstoned.

struct DelaunayCore {
  struct Tri {
    std::array<int, 3> v;   // ccw
    std::array<int, 3> nb;  // nb[i] across edge opposite v[i], -1 if none
    bool alive = true;
  };

  std::vector<Point> pts;
  std::vector<Tri> tris;
  std::vector<int> vert_tri;  // one alive incident triangle per vertex

  static double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

  bool in_circum(const Tri& t, Point p) const {
    Point a = pts[t.v[0]], b = pts[t.v[1]], c = pts[t.v[2]];
    double ax = a.x - p.x, ay = a.y - p.y;
    double bx = b.x - p.x, by = b.y - p.y;
    double cx = c.x - p.x, cy = c.y - p.y;
    double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    double det = ax * (by * c2 - cy * b2) - ay * (bx * c2 - cx * b2) +
                 a2 * (bx * cy - cx * by);
    double L = std::sqrt(std::max({a2, b2, c2}));
    double eps = 1e-11 * L * L * L * L;
    return det > eps;  // strictly inside; cocircular ties stay out
  }

  void init_super(Point lo, Point hi) {
    Point c{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
    double w = std::max({hi.x - lo.x, hi.y - lo.y, 1e-6});
    pts = {Point{c.x - 40 * w, c.y - 20 * w}, Point{c.x + 40 * w, c.y - 20 * w},
           Point{c.x, c.y + 40 * w}};
    tris.push_back({{0, 1, 2}, {-1, -1, -1}, true});
    vert_tri = {0, 0, 0};
  }

  int locate(Point p, int hint) const {
    int t = hint;
    if (t < 0 || t >= static_cast<int>(tris.size()) || !tris[t].alive) {
      t = -1;
      for (int i = static_cast<int>(tris.size()) - 1; i >= 0; --i)
        if (tris[i].alive) {
          t = i;
          break;
        }
    }
    for (int step = 0; step < 100000 && t >= 0; ++step) {
      const Tri& tri = tris[t];
      int next = -1;
      for (int i = 0; i < 3; ++i) {
        Point a = pts[tri.v[(i + 1) % 3]], b = pts[tri.v[(i + 2) % 3]];
        double scale = std::max(1e-300, dist(a, b) * std::max(dist(a, p), dist(b, p)));
        if (orient(a, b, p) < -1e-13 * scale) {
          next = tri.nb[i];
          break;
        }
      }
      if (next == -1) return t;
      t = next;
    }
    // Walk failed (numerical cycling); brute-force scan.
    for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
      if (!tris[i].alive) continue;
      const Tri& tri = tris[i];
      bool inside = true;
      for (int k = 0; k < 3 && inside; ++k) {
        Point a = pts[tri.v[(k + 1) % 3]], b = pts[tri.v[(k + 2) % 3]];
        double scale = std::max(1e-300, dist(a, b) * std::max(dist(a, p), dist(b, p)));
        if (orient(a, b, p) < -1e-10 * scale) inside = false;
      }
      if (inside) return i;
    }
    throw MeshError("point location failed");
  }

  // Inserts p, returns its vertex id. If p coincides with an existing vertex
  // of the containing triangle, that id is returned and nothing changes.
  // When removed_edges is given, it receives the (normalized) edges of every
  // cavity triangle, i.e. all edges this insertion may have destroyed.
  int insert(Point p, int hint,
             std::vector<std::pair<int, int>>* removed_edges = nullptr) {
    int t0 = locate(p, hint);
    for (int k = 0; k < 3; ++k) {
      int v = tris[t0].v[k];
      if (dist(pts[v], p) < 1e-14) return v;
    }

    // Grow the strictly-in-circumcircle cavity from t0; additionally absorb
    // neighbors across cavity edges that p is (nearly) collinear with, so a
    // point on a shared edge opens both sides.
    std::set<int> cavity{t0};
    {
      std::vector<int> stack{t0};
      while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        for (int i = 0; i < 3; ++i) {
          int n = tris[t].nb[i];
          if (n < 0 || cavity.count(n)) continue;
          if (in_circum(tris[n], p)) {
            cavity.insert(n);
            stack.push_back(n);
          }
        }
      }
      bool grew = true;
      while (grew) {
        grew = false;
        for (int t : std::vector<int>(cavity.begin(), cavity.end())) {
          for (int i = 0; i < 3; ++i) {
            int n = tris[t].nb[i];
            if (n < 0 || cavity.count(n)) continue;
            Point a = pts[tris[t].v[(i + 1) % 3]], b = pts[tris[t].v[(i + 2) % 3]];
            double scale =
                std::max(1e-300, dist(a, b) * std::max(dist(a, p), dist(b, p)));
            if (std::abs(orient(a, b, p)) <= 1e-12 * scale) {
              cavity.insert(n);
              grew = true;
            }
          }
        }
      }
    }

    if (removed_edges)
      for (int t : cavity)
        for (int i = 0; i < 3; ++i) {
          int a = tris[t].v[(i + 1) % 3], b = tris[t].v[(i + 2) % 3];
          removed_edges->push_back({std::min(a, b), std::max(a, b)});
        }

    // Directed boundary edges of the cavity, interior on the left.
    struct BEdge {
      int a, b, outside;
    };
    std::vector<BEdge> bedges;
    for (int t : cavity)
      for (int i = 0; i < 3; ++i) {
        int n = tris[t].nb[i];
        if (n >= 0 && cavity.count(n)) continue;
        bedges.push_back({tris[t].v[(i + 1) % 3], tris[t].v[(i + 2) % 3], n});
      }
    // Chain them into a loop.
    std::map<int, int> next_of;  // edge start -> index in bedges
    for (size_t i = 0; i < bedges.size(); ++i) next_of[bedges[i].a] = static_cast<int>(i);
    std::vector<BEdge> loop;
    loop.push_back(bedges[0]);
    while (loop.size() < bedges.size()) {
      auto it = next_of.find(loop.back().b);
      if (it == next_of.end()) throw MeshError("cavity boundary not a loop");
      loop.push_back(bedges[it->second]);
    }
    if (loop.back().b != loop.front().a) throw MeshError("cavity boundary open");

    int pid = static_cast<int>(pts.size());
    pts.push_back(p);
    vert_tri.push_back(-1);

    std::vector<int> fresh(loop.size());
    for (size_t i = 0; i < loop.size(); ++i) {
      fresh[i] = static_cast<int>(tris.size());
      tris.push_back({{pid, loop[i].a, loop[i].b}, {-1, -1, -1}, true});
      double ar = orient(p, pts[loop[i].a], pts[loop[i].b]);
      if (!(ar > 0)) throw MeshError("degenerate cavity fan triangle");
    }
    int m = static_cast<int>(loop.size());
    for (int i = 0; i < m; ++i) {
      Tri& t = tris[fresh[i]];
      t.nb[0] = loop[i].outside;
      t.nb[1] = fresh[(i + 1) % m];
      t.nb[2] = fresh[(i + m - 1) % m];
      if (loop[i].outside >= 0) {
        Tri& o = tris[loop[i].outside];
        for (int k = 0; k < 3; ++k) {
          int oa = o.v[(k + 1) % 3], ob = o.v[(k + 2) % 3];
          if ((oa == loop[i].b && ob == loop[i].a)) o.nb[k] = fresh[i];
        }
      }
      vert_tri[loop[i].a] = fresh[i];
      vert_tri[loop[i].b] = fresh[i];
    }
    vert_tri[pid] = fresh[0];
    for (int t : cavity) tris[t].alive = false;
    return pid;
  }

  // Walk the triangles around vertex a; returns alive triangles incident to a.
  std::vector<int> star(int a) const {
    std::vector<int> out;
    int t0 = vert_tri[a];
    if (t0 < 0 || !tris[t0].alive) {
      for (int i = 0; i < static_cast<int>(tris.size()); ++i)
        if (tris[i].alive &&
            (tris[i].v[0] == a || tris[i].v[1] == a || tris[i].v[2] == a))
          out.push_back(i);
      return out;
    }
    int t = t0;
    // march ccw; boundary of the super-triangle never blocks interior stars
    for (int guard = 0; guard < 10000; ++guard) {
      out.push_back(t);
      int i = 0;
      while (tris[t].v[i] != a) ++i;
      int n = tris[t].nb[(i + 1) % 3];  // across edge (a, v[i+2])
      if (n < 0) break;
      if (n == t0) return out;
      t = n;
    }
    // hit a boundary: march the other way from t0
    int t_cw = t0;
    for (int guard = 0; guard < 10000; ++guard) {
      int i = 0;
      while (tris[t_cw].v[i] != a) ++i;
      int n = tris[t_cw].nb[(i + 2) % 3];
      if (n < 0) break;
      t_cw = n;
      out.push_back(t_cw);
    }
    return out;
  }

  // If edge (a,b) exists, returns the (up to two) opposite apex vertex ids.
  // Returns false if the edge is not present.
  bool edge_apexes(int a, int b, std::vector<int>& apexes) const {
    apexes.clear();
    for (int t : star(a)) {
      const Tri& tri = tris[t];
      for (int i = 0; i < 3; ++i) {
        int va = tri.v[(i + 1) % 3], vb = tri.v[(i + 2) % 3];
        if ((va == a && vb == b) || (va == b && vb == a)) apexes.push_back(tri.v[i]);
      }
    }
    return !apexes.empty();
  }
};

double circumradius(Point a, Point b, Point c, Point* center) {
  double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  if (std::abs(d) < 1e-300) {
    if (center) *center = a;
    return std::numeric_limits<double>::infinity();
  }
  double a2 = a.x * a.x + a.y * a.y;
  double b2 = b.x * b.x + b.y * b.y;
  double c2 = c.x * c.x + c.y * c.y;
  Point u{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
          (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
  if (center) *center = u;
  return dist(u, a);
}

struct SizeField {
  double base = 0.0;
  struct Sink {
    Point c;
    double radius;
    double exponent;     // 1 - min(s,1)
    double floor_ratio;  // q^depth
  };
  std::vector<Sink> sinks;

  double operator()(Point p) const {
    double s = base;
    for (const auto& k : sinks) {
      double r = dist(p, k.c);
      double f = 0.5 * std::pow(std::max(r, 1e-300) / k.radius, k.exponent);
      f = std::clamp(f, k.floor_ratio, 1.0);
      s = std::min(s, base * f);
    }
    return s;
  }
  double min_size() const {
    double f = 1.0;
    for (const auto& k : sinks) f = std::min(f, k.floor_ratio);
    return base * f;
  }
};

struct SubSeg {
  int a = -1, b = -1;  // point ids, oriented ccw along the loop
  Condition cond = Condition::Dirichlet;
  int arc_index = -1;
  int vertex_a = -1, vertex_b = -1;
  bool alive = true;
};

struct Mesher {
  DelaunayCore dt;
  std::vector<SubSeg> subsegs;
  std::map<std::pair<int, int>, int> subseg_by_edge;  // normalized pair -> index
  SizeField size;
  std::vector<bool> is_corner;  // per point id: spec corner?
  int last_hint = 0;

  void register_subseg(const SubSeg& s) {
    int idx = static_cast<int>(subsegs.size());
    subsegs.push_back(s);
    subseg_by_edge[{std::min(s.a, s.b), std::max(s.a, s.b)}] = idx;
  }

  // Shell-aware split location: subsegments ending at a spec corner split at
  // a power-of-two distance from the corner so the arms of an acute corner
  // stop mutually encroaching.
  Point split_point(const SubSeg& s) const {
    Point a = dt.pts[s.a], b = dt.pts[s.b];
    bool ca = is_corner[s.a], cb = is_corner[s.b];
    if (ca == cb) return 0.5 * (a + b);
    double len = dist(a, b);
    double t = std::exp2(std::round(std::log2(0.5 * len)));
    t = std::clamp(t, len / 3.0, 2.0 * len / 3.0);
    Point corner = ca ? a : b;
    Point other = ca ? b : a;
    return corner + (t / len) * (other - corner);
  }

  bool edge_present(int a, int b) const {
    std::vector<int> apexes;
    return dt.edge_apexes(a, b, apexes);
  }

  // Inserts p and repairs any boundary subsegment the insertion destroyed
  // (conforming-Delaunay recovery by recursive splitting).
  int insert_checked(Point p, int hint) {
    if (++insert_count > 4'000'000) throw MeshError("mesh refinement diverged");
    std::vector<std::pair<int, int>> removed;
    int id = dt.insert(p, hint, &removed);
    last_hint = dt.vert_tri[id];
    is_corner.resize(dt.pts.size(), false);
    std::vector<int> cand;
    for (const auto& e : removed) {
      auto it = subseg_by_edge.find(e);
      if (it != subseg_by_edge.end()) cand.push_back(it->second);
    }
    for (int si : cand)
      if (subsegs[si].alive && !edge_present(subsegs[si].a, subsegs[si].b))
        split_subseg(si);
    return id;
  }

  // Splits subseg si at the shell-aware point; recovers both children.
  int split_subseg(int si) {
    SubSeg s = subsegs[si];
    Point m = split_point(s);
    if (dist(m, dt.pts[s.a]) < 1e-13 || dist(m, dt.pts[s.b]) < 1e-13)
      throw MeshError("boundary split collapsed; input nearly degenerate");
    subsegs[si].alive = false;
    subseg_by_edge.erase({std::min(s.a, s.b), std::max(s.a, s.b)});
    int mid = insert_checked(m, last_hint);
    int left = static_cast<int>(subsegs.size());
    register_subseg({s.a, mid, s.cond, s.arc_index, s.vertex_a, -1, true});
    int right = static_cast<int>(subsegs.size());
    register_subseg({mid, s.b, s.cond, s.arc_index, -1, s.vertex_b, true});
    for (int child : {left, right})
      if (subsegs[child].alive &&
          !edge_present(subsegs[child].a, subsegs[child].b))
        split_subseg(child);
    return mid;
  }

  void full_conformity_sweep() {
    bool changed = true;
    int guard = 0;
    while (changed) {
      if (++guard > 64) throw MeshError("boundary conformity did not settle");
      changed = false;
      for (int si = 0; si < static_cast<int>(subsegs.size()); ++si) {
        if (!subsegs[si].alive) continue;
        if (!edge_present(subsegs[si].a, subsegs[si].b)) {
          split_subseg(si);
          changed = true;
        }
      }
    }
  }

  int insert_count = 0;

  std::vector<char> flood_inside() const {
    std::set<std::pair<int, int>> blocked;
    for (const auto& s : subsegs)
      if (s.alive) blocked.insert({std::min(s.a, s.b), std::max(s.a, s.b)});
    std::vector<char> state(dt.tris.size(), 0);  // 0 unknown, 1 outside, 2 inside
    std::vector<int> stack;
    for (int i = 0; i < static_cast<int>(dt.tris.size()); ++i)
      if (dt.tris[i].alive)
        for (int k = 0; k < 3; ++k)
          if (dt.tris[i].v[k] < 3) {  // touches a super-triangle vertex
            state[i] = 1;
            stack.push_back(i);
            break;
          }
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int i = 0; i < 3; ++i) {
        int n = dt.tris[t].nb[i];
        if (n < 0 || !dt.tris[n].alive || state[n] != 0) continue;
        int a = dt.tris[t].v[(i + 1) % 3], b = dt.tris[t].v[(i + 2) % 3];
        if (blocked.count({std::min(a, b), std::max(a, b)})) continue;
        state[n] = 1;
        stack.push_back(n);
      }
    }
    for (int i = 0; i < static_cast<int>(dt.tris.size()); ++i)
      if (dt.tris[i].alive && state[i] == 0) state[i] = 2;
    return state;
  }
};

}  // namespace

double Mesh::triangle_area(int t) const {
  const auto& tr = triangles[t];
  return 0.5 * cross(nodes[tr[1]] - nodes[tr[0]], nodes[tr[2]] - nodes[tr[0]]);
}

double Mesh::total_area() const {
  double s = 0;
  for (size_t t = 0; t < triangles.size(); ++t) s += triangle_area(static_cast<int>(t));
  return s;
}

Point Mesh::centroid(int t) const {
  const auto& tr = triangles[t];
  return {(nodes[tr[0]].x + nodes[tr[1]].x + nodes[tr[2]].x) / 3.0,
          (nodes[tr[0]].y + nodes[tr[1]].y + nodes[tr[2]].y) / 3.0};
}

double Mesh::triangle_diameter(int t) const {
  const auto& tr = triangles[t];
  return std::max({dist(nodes[tr[0]], nodes[tr[1]]), dist(nodes[tr[1]], nodes[tr[2]]),
                   dist(nodes[tr[2]], nodes[tr[0]])});
}

void Mesh::validate() const {
  if (h_target <= 0) throw MeshError("h_target not set");
  std::map<std::pair<int, int>, int> edge_count;
  for (size_t t = 0; t < triangles.size(); ++t) {
    if (triangle_area(static_cast<int>(t)) <= 0)
      throw MeshError("non-positive triangle area");
    const auto& tr = triangles[t];
    for (int i = 0; i < 3; ++i) {
      int a = tr[i], b = tr[(i + 1) % 3];
      ++edge_count[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::set<std::pair<int, int>> bset;
  for (const auto& e : boundary_edges) bset.insert({std::min(e.a, e.b), std::max(e.a, e.b)});
  for (const auto& [e, c] : edge_count) {
    bool on_boundary = bset.count(e) > 0;
    if (on_boundary && c != 1) throw MeshError("boundary edge not simple");
    if (!on_boundary && c != 2) throw MeshError("hanging node / open interior edge");
  }
  for (const auto& e : bset)
    if (!edge_count.count(e)) throw MeshError("boundary edge missing from mesh");
}

bool Mesh::node_on_dirichlet_closure(int node) const {
  for (const auto& e : boundary_edges)
    if (e.condition == Condition::Dirichlet && (e.a == node || e.b == node)) return true;
  return false;
}

Mesh triangulate(const PlanarDomainSpec& spec, double h, const GradingPolicy& grading) {
  if (h <= 0) throw MeshError("h must be positive");
  auto vertices = classify_vertices(spec);
  auto segs = boundary_segments(spec, vertices);
  double min_seg = std::numeric_limits<double>::infinity();
  Point lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const auto& s : segs) {
    min_seg = std::min(min_seg, dist(s.a, s.b));
    for (Point p : {s.a, s.b}) {
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
  }
  if (h >= min_seg) throw MeshError("h is coarser than the shortest boundary edge");

  int depth = grading.depth;
  if (depth == 0)
    depth = std::min(12, std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / h)))));

  Mesher M;
  M.size.base = h;
  for (const auto& v : vertices) {
    double s = v.singular_exponent();
    if (s >= grading.exponent_threshold) continue;
    double incident = std::numeric_limits<double>::infinity();
    for (const auto& sg : segs) {
      if (sg.vertex_a == v.id || sg.vertex_b == v.id)
        incident = std::min(incident, dist(sg.a, sg.b));
    }
    SizeField::Sink sink;
    sink.c = v.position;
    sink.radius = 0.5 * incident;
    sink.exponent = 1.0 - std::min(s, 1.0);
    sink.floor_ratio = std::pow(grading.ratio_q, depth);
    M.size.sinks.push_back(sink);
  }

  M.dt.init_super(lo, hi);
  M.is_corner.assign(3, false);

  // Insert spec corners first (deterministic: spec order), then chop each
  // segment against the size field.
  std::vector<int> vertex_pt(vertices.size(), -1);
  auto insert_pt = [&](Point p) { return M.insert_checked(p, M.last_hint); };
  for (const auto& v : vertices) {
    int id = insert_pt(v.position);
    vertex_pt[v.id] = id;
    M.is_corner[id] = true;
  }
  for (const auto& sg : segs) {
    // Midpoint chop against the local size field, by parameter bisection.
    std::vector<double> ts{0.0, 1.0};
    std::vector<std::pair<double, double>> work{{0.0, 1.0}};
    while (!work.empty()) {
      auto [t0, t1] = work.back();
      work.pop_back();
      Point a = sg.a + t0 * (sg.b - sg.a);
      Point b = sg.a + t1 * (sg.b - sg.a);
      Point mid = 0.5 * (a + b);
      double len = dist(a, b);
      double target = std::min({M.size(a), M.size(b), M.size(mid)});
      if (len > target && len > 4e-13) {
        double tm = 0.5 * (t0 + t1);
        ts.push_back(tm);
        work.push_back({t0, tm});
        work.push_back({tm, t1});
      }
    }
    std::sort(ts.begin(), ts.end());
    std::vector<int> ids;
    for (size_t i = 0; i < ts.size(); ++i) {
      Point p = sg.a + ts[i] * (sg.b - sg.a);
      if (i == 0) p = sg.a;
      if (i + 1 == ts.size()) p = sg.b;
      ids.push_back(insert_pt(p));
    }
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
      SubSeg s;
      s.a = ids[i];
      s.b = ids[i + 1];
      s.cond = sg.condition;
      s.arc_index = sg.arc_index;
      s.vertex_a = (i == 0) ? sg.vertex_a : -1;
      s.vertex_b = (i + 2 == ts.size()) ? sg.vertex_b : -1;
      M.register_subseg(s);
    }
  }

  M.full_conformity_sweep();

  // Size- and quality-driven circumcenter refinement over interior triangles.
  const double quality_ratio = 1.0 / (2.0 * std::sin(26.0 * std::numbers::pi / 180.0));
  const double floor_len = 0.25 * M.size.min_size();
  const size_t max_points = 4u << 20;
  for (int pass = 0; pass < 400; ++pass) {
    auto state = M.flood_inside();
    bool changed = false;
    size_t n_at_start = M.dt.tris.size();
    for (size_t t = 0; t < n_at_start; ++t) {
      if (!M.dt.tris[t].alive || t >= state.size() || state[t] != 2) continue;
      if (M.dt.pts.size() > max_points) throw MeshError("refinement exploded");
      Point a = M.dt.pts[M.dt.tris[t].v[0]];
      Point b = M.dt.pts[M.dt.tris[t].v[1]];
      Point c = M.dt.pts[M.dt.tris[t].v[2]];
      Point cc;
      double R = circumradius(a, b, c, &cc);
      double shortest = std::min({dist(a, b), dist(b, c), dist(c, a)});
      double longest = std::max({dist(a, b), dist(b, c), dist(c, a)});
      Point ctr{(a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3};
      double sz = std::min(M.size(ctr), M.size(cc));
      bool bad_size = longest > sz && R > floor_len;
      bool bad_quality = (R / shortest > quality_ratio) && R > floor_len;
      if (!bad_size && !bad_quality) continue;

      // Only insert circumcenters that land strictly inside the domain; a
      // center beyond the boundary means the boundary already limits this
      // triangle and splitting must come from its subsegments instead.
      int tc = M.dt.locate(cc, static_cast<int>(t));
      if (!M.dt.tris[tc].alive || tc >= static_cast<int>(state.size()) ||
          state[tc] != 2)
        continue;
      bool too_close = false;
      for (int k = 0; k < 3; ++k)
        if (dist(M.dt.pts[M.dt.tris[tc].v[k]], cc) < 1e-3 * floor_len) too_close = true;
      if (too_close) continue;
      M.insert_checked(cc, tc);
      changed = true;
    }
    if (!changed) break;
  }

  // Extract the interior triangulation.
  auto state = M.flood_inside();
  Mesh mesh;
  mesh.h_target = h;
  mesh.vertices = vertices;
  std::vector<int> remap(M.dt.pts.size(), -1);
  auto map_node = [&](int pid) {
    if (remap[pid] == -1) {
      remap[pid] = static_cast<int>(mesh.nodes.size());
      mesh.nodes.push_back(M.dt.pts[pid]);
    }
    return remap[pid];
  };
  // Stable node order: point-insertion order restricted to used points.
  std::vector<bool> used(M.dt.pts.size(), false);
  for (size_t t = 0; t < M.dt.tris.size(); ++t)
    if (M.dt.tris[t].alive && state[t] == 2)
      for (int k = 0; k < 3; ++k) used[M.dt.tris[t].v[k]] = true;
  for (size_t p = 3; p < M.dt.pts.size(); ++p)
    if (used[p]) map_node(static_cast<int>(p));
  for (size_t t = 0; t < M.dt.tris.size(); ++t) {
    if (!M.dt.tris[t].alive || state[t] != 2) continue;
    std::array<int, 3> tr{map_node(M.dt.tris[t].v[0]), map_node(M.dt.tris[t].v[1]),
                          map_node(M.dt.tris[t].v[2])};
    int mi = static_cast<int>(std::min_element(tr.begin(), tr.end()) - tr.begin());
    std::rotate(tr.begin(), tr.begin() + mi, tr.end());
    mesh.triangles.push_back(tr);
  }
  for (const auto& s : M.subsegs) {
    if (!s.alive) continue;
    BoundaryEdge e;
    e.a = remap[s.a];
    e.b = remap[s.b];
    e.condition = s.cond;
    e.arc_index = s.arc_index;
    e.vertex_a = s.vertex_a;
    e.vertex_b = s.vertex_b;
    if (e.a < 0 || e.b < 0) throw MeshError("boundary node unused");
    mesh.boundary_edges.push_back(e);
  }
  mesh.vertex_node.assign(vertices.size(), -1);
  for (const auto& v : vertices) mesh.vertex_node[v.id] = remap[vertex_pt[v.id]];
  for (const auto& arc : spec.arcs) mesh.arc_ids.push_back(arc.arc_id);

  mesh.validate();
  return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh out;
  out.h_target = mesh.h_target / 2;
  out.nodes = mesh.nodes;
  out.vertices = mesh.vertices;
  out.vertex_node = mesh.vertex_node;
  out.arc_ids = mesh.arc_ids;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid_of = [&](int a, int b) {
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
    midpoint[key] = id;
    return id;
  };
  for (const auto& tr : mesh.triangles) {
    int m01 = mid_of(tr[0], tr[1]);
    int m12 = mid_of(tr[1], tr[2]);
    int m20 = mid_of(tr[2], tr[0]);
    out.triangles.push_back({tr[0], m01, m20});
    out.triangles.push_back({tr[1], m12, m01});
    out.triangles.push_back({tr[2], m20, m12});
    out.triangles.push_back({m01, m12, m20});
  }
  for (const auto& e : mesh.boundary_edges) {
    int m = mid_of(e.a, e.b);
    out.boundary_edges.push_back({e.a, m, e.condition, e.arc_index, e.vertex_a, -1});
    out.boundary_edges.push_back({m, e.b, e.condition, e.arc_index, -1, e.vertex_b});
  }
  return out;
}

std::vector<int> boundary_chain(const Mesh& mesh, const std::string& arc_id) {
  for (size_t i = 0; i < mesh.arc_ids.size(); ++i)
    if (mesh.arc_ids[i] == arc_id) return boundary_chain(mesh, static_cast<int>(i));
  throw MeshError("arc not found: " + arc_id);
}

std::vector<int> boundary_chain(const Mesh& mesh, int arc_index) {
  std::map<int, int> next;  // node -> successor along ccw orientation
  std::set<int> heads, tails;
  for (const auto& e : mesh.boundary_edges) {
    if (e.arc_index != arc_index) continue;
    next[e.a] = e.b;
    heads.insert(e.a);
    tails.insert(e.b);
  }
  if (next.empty()) throw MeshError("arc not found");
  int start = -1;
  for (int h : heads)
    if (!tails.count(h)) start = h;
  if (start == -1) start = *heads.begin();  // arc forms a loop (whole boundary)
  std::vector<int> chain{start};
  while (true) {
    auto it = next.find(chain.back());
    if (it == next.end()) break;
    chain.push_back(it->second);
    if (it->second == start) break;
    if (chain.size() > next.size() + 2) throw MeshError("arc chain is not a path");
  }
  return chain;
}

// ---------------------------------------------------------------------------
// CSV round trip

namespace {
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}
}  // namespace

void write_mesh_csv(const Mesh& mesh, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  {
    std::ofstream f(fs::path(directory) / "nodes.csv");
    f << "node_id,x,y\n";
    char buf[80];
    for (size_t i = 0; i < mesh.nodes.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, mesh.nodes[i].x,
                    mesh.nodes[i].y);
      f << buf;
    }
  }
  {
    std::ofstream f(fs::path(directory) / "triangles.csv");
    f << "tri_id,n0,n1,n2\n";
    for (size_t i = 0; i < mesh.triangles.size(); ++i)
      f << i << ',' << mesh.triangles[i][0] << ',' << mesh.triangles[i][1] << ','
        << mesh.triangles[i][2] << '\n';
  }
  {
    std::ofstream f(fs::path(directory) / "boundary_edges.csv");
    f << "edge_id,node_a,node_b,condition,arc_index,arc_id,vertex_a,vertex_b\n";
    for (size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
      const auto& e = mesh.boundary_edges[i];
      std::string arc = e.arc_index >= 0 &&
                                e.arc_index < static_cast<int>(mesh.arc_ids.size())
                            ? mesh.arc_ids[e.arc_index]
                            : "";
      f << i << ',' << e.a << ',' << e.b << ','
        << (e.condition == Condition::Dirichlet ? 'D' : 'N') << ',' << e.arc_index
        << ',' << arc << ',' << e.vertex_a << ',' << e.vertex_b << '\n';
    }
  }
}

Mesh read_mesh_csv(const std::string& directory) {
  namespace fs = std::filesystem;
  Mesh mesh;
  mesh.h_target = 1.0;  // unknown; not persisted
  auto open = [&](const char* name) {
    std::ifstream f(fs::path(directory) / name);
    if (!f) throw MeshError(std::string("cannot open ") + name);
    return f;
  };
  {
    auto f = open("nodes.csv");
    std::string line;
    std::getline(f, line);
    if (line.rfind("node_id", 0) != 0) throw MeshError("nodes.csv: missing header");
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      auto c = split_csv_line(line);
      if (c.size() < 3) throw MeshError("nodes.csv: missing column (need node_id,x,y)");
      mesh.nodes.push_back({std::stod(c[1]), std::stod(c[2])});
    }
  }
  {
    auto f = open("triangles.csv");
    std::string line;
    std::getline(f, line);
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      auto c = split_csv_line(line);
      if (c.size() < 4)
        throw MeshError("triangles.csv: missing column (need tri_id,n0,n1,n2)");
      mesh.triangles.push_back({std::stoi(c[1]), std::stoi(c[2]), std::stoi(c[3])});
    }
  }
  {
    auto f = open("boundary_edges.csv");
    std::string line;
    std::getline(f, line);
    std::map<int, std::string> arcs;
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      auto c = split_csv_line(line);
      if (c.size() < 8) throw MeshError("boundary_edges.csv: missing column");
      BoundaryEdge e;
      e.a = std::stoi(c[1]);
      e.b = std::stoi(c[2]);
      e.condition = c[3] == "D" ? Condition::Dirichlet : Condition::Neumann;
      e.arc_index = std::stoi(c[4]);
      if (e.arc_index >= 0) arcs[e.arc_index] = c[5];
      e.vertex_a = std::stoi(c[6]);
      e.vertex_b = std::stoi(c[7]);
      mesh.boundary_edges.push_back(e);
    }
    int max_arc = -1;
    for (const auto& [k, v] : arcs) max_arc = std::max(max_arc, k);
    mesh.arc_ids.assign(max_arc + 1, "");
    for (const auto& [k, v] : arcs) mesh.arc_ids[k] = v;
  }
  return mesh;
}

}  // namespace hotspots
