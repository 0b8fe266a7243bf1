#include "hotspots/critical_points.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <set>

namespace hotspots {

namespace {

struct BoundaryCandidate {
  double s = 0;  // arclength along the run
  Point p;
  double u_value = 0;
  bool is_max = false;
  double local_h = 0;
};

// Net sign-change merging: groups of nearby alternating crossings collapse to
// their topological net crossing (odd group -> middle point, even -> none).
std::vector<BoundaryCandidate> merge_run(std::vector<BoundaryCandidate> cand,
                                         double merge_dist) {
  std::vector<BoundaryCandidate> out;
  size_t i = 0;
  while (i < cand.size()) {
    size_t j = i;
    while (j + 1 < cand.size() && cand[j + 1].s - cand[j].s < merge_dist) ++j;
    size_t count = j - i + 1;
    if (count % 2 == 1) out.push_back(cand[i + count / 2]);
    i = j + 1;
  }
  return out;
}

}  // namespace

CriticalPointReport find_critical_points(const EigenPair& eig, const Mesh& mesh,
                                         const RecoveredGradient& g,
                                         const CriticalPointOptions& opts) {
  CriticalPointReport report;
  report.grad_max = g.max_norm();
  const double umax = eig.u.size() ? eig.u.cwiseAbs().maxCoeff() : 0.0;
  const double h = mesh.h_target;
  const double degenerate_threshold =
      opts.degenerate_scale * h * eig.lambda1 * umax;

  // ---- Neumann boundary: sign changes of the tangential derivative.
  std::set<int> interval_arcs;
  for (size_t arc = 0; arc < mesh.arc_ids.size(); ++arc) {
    bool is_neumann = false;
    for (const auto& e : mesh.boundary_edges)
      if (e.arc_index == static_cast<int>(arc)) {
        is_neumann = e.condition == Condition::Neumann;
        break;
      }
    if (!is_neumann) continue;
    std::vector<int> chain = boundary_chain(mesh, static_cast<int>(arc));

    // Split the chain at spec corners (polyline breakpoints of the arc).
    std::set<int> corner_nodes(mesh.vertex_node.begin(), mesh.vertex_node.end());
    std::vector<std::vector<int>> runs;
    std::vector<int> cur{chain.front()};
    for (size_t i = 1; i < chain.size(); ++i) {
      cur.push_back(chain[i]);
      if (corner_nodes.count(chain[i]) && i + 1 < chain.size()) {
        runs.push_back(cur);
        cur = {chain[i]};
      }
    }
    runs.push_back(cur);

    for (const auto& run : runs) {
      if (run.size() < 3) continue;
      Point tangent = normalized(mesh.nodes[run.back()] - mesh.nodes[run.front()]);
      std::vector<double> s(run.size(), 0.0), tg(run.size(), 0.0);
      for (size_t i = 0; i < run.size(); ++i) {
        if (i) s[i] = s[i - 1] + dist(mesh.nodes[run[i - 1]], mesh.nodes[run[i]]);
        tg[i] = dot(g.at_node(run[i]), tangent);
      }
      double run_len = s.back();
      double chain_max = 0;
      for (double v : tg) chain_max = std::max(chain_max, std::abs(v));

      if (chain_max <= degenerate_threshold) {
        interval_arcs.insert(static_cast<int>(arc));
        continue;
      }

      double excl = opts.vertex_exclusion * h;
      std::vector<BoundaryCandidate> raw;
      for (size_t i = 0; i + 1 < run.size(); ++i) {
        if (!(tg[i] > 0) == !(tg[i + 1] > 0)) continue;  // same sign
        if (tg[i] == 0 || tg[i + 1] == 0) continue;      // sos: zero is +
        double t = tg[i] / (tg[i] - tg[i + 1]);
        double sz = s[i] + t * (s[i + 1] - s[i]);
        if (sz < excl || sz > run_len - excl) continue;
        if (std::max(std::abs(tg[i]), std::abs(tg[i + 1])) <
            opts.flank_fraction * chain_max)
          continue;
        BoundaryCandidate c;
        c.s = sz;
        c.p = mesh.nodes[run[i]] + t * (mesh.nodes[run[i + 1]] - mesh.nodes[run[i]]);
        c.u_value = eig.u[run[i]] + t * (eig.u[run[i + 1]] - eig.u[run[i]]);
        c.is_max = tg[i] > 0;
        c.local_h = s[i + 1] - s[i];
        raw.push_back(c);
      }
      double mean_h = run_len / (run.size() - 1);
      auto merged = merge_run(raw, opts.merge_factor * mean_h);
      for (const auto& c : merged) {
        CriticalPoint cp;
        cp.location = c.p;
        cp.kind = CritKind::OnNeumannBoundary;
        cp.u_value = c.u_value;
        cp.is_local_extremum_of_edge_restriction = true;
        cp.is_max_of_edge_restriction = c.is_max;
        cp.arc_index = static_cast<int>(arc);
        report.points.push_back(cp);
      }
    }
  }
  report.interval_critical_arcs.assign(interval_arcs.begin(), interval_arcs.end());

  // ---- Vertex extrema (corners are never critical points; reported apart).
  std::vector<std::set<int>> nbrs(mesh.nodes.size());
  for (const auto& tr : mesh.triangles)
    for (int i = 0; i < 3; ++i) {
      nbrs[tr[i]].insert(tr[(i + 1) % 3]);
      nbrs[tr[i]].insert(tr[(i + 2) % 3]);
    }
  double global_max = umax;
  for (const auto& v : mesh.vertices) {
    int n = mesh.vertex_node[v.id];
    if (n < 0) continue;
    if (!(eig.u[n] > 1e-12 * umax)) continue;  // Dirichlet-closure corners sit at 0
    bool is_max = true;
    for (int m : nbrs[n])
      if (eig.u[m] > eig.u[n]) is_max = false;
    if (!is_max) continue;
    VertexExtremum ve;
    ve.vertex_id = v.id;
    ve.position = v.position;
    ve.u_value = eig.u[n];
    ve.is_global_max = eig.u[n] >= global_max - 1e-12 * umax;
    report.vertex_extrema.push_back(ve);
  }

  // ---- Interior: common zeros of the two recovered gradient components.
  auto sos = [](double v) { return v > 0 || v == 0; };
  struct InteriorCandidate {
    Point p;
    double u_value;
    double local_diam;
  };
  std::vector<InteriorCandidate> interior;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    bool sx0 = sos(g.nodal_x[tr[0]]), sy0 = sos(g.nodal_y[tr[0]]);
    bool x_mixed = sos(g.nodal_x[tr[1]]) != sx0 || sos(g.nodal_x[tr[2]]) != sx0;
    bool y_mixed = sos(g.nodal_y[tr[1]]) != sy0 || sos(g.nodal_y[tr[2]]) != sy0;
    if (!x_mixed || !y_mixed) continue;

    Point a = mesh.nodes[tr[0]], b = mesh.nodes[tr[1]], c = mesh.nodes[tr[2]];
    // Localize by subdividing the linear interpolants, then intersect the two
    // zero lines exactly.
    struct Cell {
      Point p0, p1, p2;
      double x0, x1, x2, y0, y1, y2;
    };
    std::vector<Cell> cells{{a, b, c, g.nodal_x[tr[0]], g.nodal_x[tr[1]],
                             g.nodal_x[tr[2]], g.nodal_y[tr[0]], g.nodal_y[tr[1]],
                             g.nodal_y[tr[2]]}};
    for (int round = 0; round < opts.subdivision_rounds; ++round) {
      std::vector<Cell> next;
      for (const auto& cell : cells) {
        Point m01 = 0.5 * (cell.p0 + cell.p1), m12 = 0.5 * (cell.p1 + cell.p2),
              m20 = 0.5 * (cell.p2 + cell.p0);
        double x01 = 0.5 * (cell.x0 + cell.x1), x12 = 0.5 * (cell.x1 + cell.x2),
               x20 = 0.5 * (cell.x2 + cell.x0);
        double y01 = 0.5 * (cell.y0 + cell.y1), y12 = 0.5 * (cell.y1 + cell.y2),
               y20 = 0.5 * (cell.y2 + cell.y0);
        Cell children[4] = {
            {cell.p0, m01, m20, cell.x0, x01, x20, cell.y0, y01, y20},
            {cell.p1, m12, m01, cell.x1, x12, x01, cell.y1, y12, y01},
            {cell.p2, m20, m12, cell.x2, x20, x12, cell.y2, y20, y12},
            {m01, m12, m20, x01, x12, x20, y01, y12, y20}};
        for (const auto& ch : children) {
          bool cx0 = sos(ch.x0);
          bool cy0 = sos(ch.y0);
          bool cxm = sos(ch.x1) != cx0 || sos(ch.x2) != cx0;
          bool cym = sos(ch.y1) != cy0 || sos(ch.y2) != cy0;
          if (cxm && cym) next.push_back(ch);
        }
      }
      if (next.empty()) break;
      cells = std::move(next);
    }
    if (cells.empty()) continue;

    // Zero lines of the two linear fields on the original triangle.
    auto plane = [&](double f0, double f1, double f2, double& px, double& py,
                     double& pc) {
      double area2 = cross(b - a, c - a);
      px = (f0 * (b.y - c.y) + f1 * (c.y - a.y) + f2 * (a.y - b.y)) / area2;
      py = (f0 * (c.x - b.x) + f1 * (a.x - c.x) + f2 * (b.x - a.x)) / area2;
      pc = f0 - px * a.x - py * a.y;
    };
    double ax, ay, ac, bx, by, bc;
    plane(g.nodal_x[tr[0]], g.nodal_x[tr[1]], g.nodal_x[tr[2]], ax, ay, ac);
    plane(g.nodal_y[tr[0]], g.nodal_y[tr[1]], g.nodal_y[tr[2]], bx, by, bc);
    double det = ax * by - ay * bx;
    Point q;
    double diam = mesh.triangle_diameter(static_cast<int>(t));
    if (std::abs(det) > 1e-14 * report.grad_max * report.grad_max / diam) {
      q = {(-ac * by + ay * bc) / det, (-ax * bc + ac * bx) / det};
    } else {
      // Near-parallel zero lines; fall back to the surviving cell centroid.
      q = {(cells[0].p0.x + cells[0].p1.x + cells[0].p2.x) / 3,
           (cells[0].p0.y + cells[0].p1.y + cells[0].p2.y) / 3};
    }
    // Containment in the original triangle.
    double area2 = cross(b - a, c - a);
    double l0 = cross(b - q, c - q) / area2;
    double l1 = cross(c - q, a - q) / area2;
    double l2 = cross(a - q, b - q) / area2;
    if (std::min({l0, l1, l2}) < -1e-9) continue;
    // Noise gate on the interpolated gradient at the candidate.
    double gq_x = ax * q.x + ay * q.y + ac;
    double gq_y = bx * q.x + by * q.y + bc;
    if (std::hypot(gq_x, gq_y) > opts.tau * report.grad_max) continue;
    double uq = l0 * eig.u[tr[0]] + l1 * eig.u[tr[1]] + l2 * eig.u[tr[2]];
    interior.push_back({q, uq, diam});
  }

  // Drop interior candidates that shadow a boundary critical point or corner,
  // and candidates where u is at the Dirichlet floor: the eigenfunction is
  // positive inside and its critical set stays off the Dirichlet closure, so
  // a near-zero value means gradient noise against the boundary.
  std::vector<Point> shadow;
  for (const auto& cp : report.points) shadow.push_back(cp.location);
  for (const auto& v : mesh.vertices) shadow.push_back(v.position);
  std::vector<InteriorCandidate> kept;
  for (const auto& ic : interior) {
    if (ic.u_value <= 1e-3 * umax) continue;
    bool near = false;
    for (const auto& sp : shadow)
      if (dist(sp, ic.p) < 2.0 * opts.merge_factor * ic.local_diam) near = true;
    if (!near) kept.push_back(ic);
  }
  // Cluster the rest.
  std::vector<bool> used(kept.size(), false);
  for (size_t i = 0; i < kept.size(); ++i) {
    if (used[i]) continue;
    std::vector<size_t> group{i};
    used[i] = true;
    for (size_t j = i + 1; j < kept.size(); ++j)
      if (!used[j] && dist(kept[i].p, kept[j].p) <
                          opts.merge_factor * std::max(kept[i].local_diam,
                                                       kept[j].local_diam)) {
        group.push_back(j);
        used[j] = true;
      }
    Point avg{0, 0};
    double uv = 0;
    for (size_t j : group) {
      avg = avg + kept[j].p;
      uv += kept[j].u_value;
    }
    CriticalPoint cp;
    cp.location = {avg.x / group.size(), avg.y / group.size()};
    cp.kind = CritKind::Interior;
    cp.u_value = uv / group.size();
    report.points.push_back(cp);
    if (report.points.size() > static_cast<size_t>(opts.max_candidates)) {
      report.overflow = true;
      report.points.resize(opts.max_candidates);
      break;
    }
  }
  return report;
}

namespace {

// Straight-edge frame (tangent, outward normal) of the boundary at p.
std::optional<std::pair<Point, Point>> edge_frame_at(const Mesh& mesh,
                                                     int arc_index, Point p) {
  for (const auto& e : mesh.boundary_edges) {
    if (e.arc_index != arc_index) continue;
    Point a = mesh.nodes[e.a], b = mesh.nodes[e.b];
    double len = dist(a, b);
    Point t = normalized(b - a);
    double along = dot(p - a, t);
    double off = std::abs(cross(t, p - a));
    if (along >= -1e-9 && along <= len + 1e-9 && off <= 1e-7 * std::max(1.0, len)) {
      Point nu{t.y, -t.x};  // outward for a ccw loop
      return std::make_pair(t, nu);
    }
  }
  return std::nullopt;
}

int count_circle_crossings(const CriticalPoint& p, const Eigen::VectorXd& u,
                           const MeshLocator& loc, double rho,
                           const std::optional<std::pair<Point, Point>>& frame,
                           int samples, bool& ok) {
  ok = true;
  std::vector<double> vals;
  vals.reserve(samples);
  double umax = u.cwiseAbs().maxCoeff();
  for (int k = 0; k < samples; ++k) {
    double th = 2 * std::numbers::pi * k / samples;
    Point x = p.location + Point{rho * std::cos(th), rho * std::sin(th)};
    auto v = loc.eval(u, x);
    if (!v && frame) {
      // Reflect across the Neumann edge line through p.
      Point d = x - p.location;
      Point mirrored =
          p.location + dot(d, frame->first) * frame->first - dot(d, frame->second) * frame->second;
      v = loc.eval(u, mirrored);
    }
    if (!v) {
      ok = false;
      return -1;
    }
    vals.push_back(*v - p.u_value);
  }
  // Crossings of the sign sequence, skipping samples at the noise floor.
  double eps = 1e-11 * umax;
  int first_sign = 0, prev = 0, crossings = 0;
  for (double v : vals) {
    if (std::abs(v) <= eps) continue;
    int s = v > 0 ? 1 : -1;
    if (prev != 0 && s != prev) ++crossings;
    if (first_sign == 0) first_sign = s;
    prev = s;
  }
  if (prev != 0 && first_sign != 0 && prev != first_sign) ++crossings;  // wrap
  return crossings;
}

}  // namespace

IndexValue index_of(const CriticalPoint& p, const Eigen::VectorXd& u_nodal,
                    const Mesh& mesh, const MeshLocator& loc,
                    const IndexOptions& opts) {
  auto hit = loc.locate(p.location);
  if (!hit) return IndexValue::Unknown;
  double local_h = mesh.triangle_diameter(hit->triangle);
  std::optional<std::pair<Point, Point>> frame;
  if (p.kind == CritKind::OnNeumannBoundary)
    frame = edge_frame_at(mesh, p.arc_index, p.location);

  double rho = opts.radius_factor * local_h;
  for (int shrink = 0; shrink < 3; ++shrink) {
    bool ok1 = false, ok2 = false;
    int n1 = count_circle_crossings(p, u_nodal, loc, rho, frame, opts.samples, ok1);
    int n2 =
        count_circle_crossings(p, u_nodal, loc, 2 * rho, frame, opts.samples, ok2);
    if (!ok1) {
      rho *= 0.5;
      continue;
    }
    if (!ok2) return IndexValue::Unknown;  // doubled circle exits the domain
    if (n1 != n2) return IndexValue::Unknown;
    switch (n1) {
      case 0: return IndexValue::PlusOne;
      case 2: return IndexValue::Zero;
      case 4: return IndexValue::MinusOne;
      default: return IndexValue::Unknown;
    }
  }
  return IndexValue::Unknown;
}

void classify_indices(CriticalPointReport& report, const EigenPair& eig,
                      const Mesh& mesh, const MeshLocator& loc) {
  for (auto& p : report.points) p.index = index_of(p, eig.u, mesh, loc);
}

MonotoneResult check_monotone(const RecoveredGradient& g, const Mesh& mesh,
                              const DerivativeFieldSpec& l) {
  if (l.kind != DerivativeFieldSpec::Kind::Constant)
    throw std::invalid_argument("monotonicity check needs a constant field");
  // Barycenter values of the recovered (nodal) field: the area-weighted
  // averaging suppresses the raw element-gradient noise of boundary slivers.
  Point d = l.direction_at({0, 0});
  double mn = std::numeric_limits<double>::infinity();
  for (const auto& tr : mesh.triangles) {
    double v = 0;
    for (int k = 0; k < 3; ++k)
      v += d.x * g.nodal_x[tr[k]] + d.y * g.nodal_y[tr[k]];
    mn = std::min(mn, v / 3.0);
  }
  MonotoneResult out;
  out.min_value = mn;
  out.holds = mn > -1e-6 * g.max_norm();
  return out;
}

CountBoundResult count_critical_on_N(const CriticalPointReport& report,
                                     const GraphFunction& f) {
  CountBoundResult out;
  out.bound_n = count_bound_n(f);
  for (const auto& p : report.points)
    if (p.kind == CritKind::OnNeumannBoundary) {
      ++out.k;
      if (p.is_local_extremum_of_edge_restriction) ++out.extrema_count;
    }
  int extrema_bound = out.bound_n % 2 == 1 ? (out.bound_n + 1) / 2 : out.bound_n / 2;
  out.satisfied = out.k <= out.bound_n && out.extrema_count <= extrema_bound;
  return out;
}

}  // namespace hotspots
