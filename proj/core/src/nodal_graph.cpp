#include "hotspots/nodal_graph.hpp"

#include <map>

namespace hotspots {

double NodalArc::length() const {
  double s = 0;
  for (size_t i = 0; i + 1 < points.size(); ++i) s += dist(points[i], points[i + 1]);
  return s;
}

namespace {

// Simulation-of-simplicity sign: exact zeros count as positive.
inline int sos_sign(double v) { return v > 0 || v == 0 ? 1 : -1; }

struct Crossing {
  Point p;
  bool on_boundary = false;
  Condition cond = Condition::Neumann;
  int arc_index = -1;
  double local_h = 0.0;
};

}  // namespace

NodalGraph nodal_graph(const Eigen::VectorXd& field, const Mesh& mesh,
                       const NodalGraphOptions& opts) {
  NodalGraph out;
  out.field_max = field.size() ? field.cwiseAbs().maxCoeff() : 0.0;
  if (out.field_max <= opts.degenerate_threshold) {
    out.degenerate = true;
    return out;
  }

  std::map<std::pair<int, int>, const BoundaryEdge*> bmap;
  for (const auto& e : mesh.boundary_edges)
    bmap[{std::min(e.a, e.b), std::max(e.a, e.b)}] = &e;

  // Crossing point per crossed edge.
  std::map<std::pair<int, int>, Crossing> cross_pt;
  auto edge_key = [](int a, int b) {
    return std::make_pair(std::min(a, b), std::max(a, b));
  };
  auto crossing_of = [&](int a, int b) -> Crossing* {
    auto key = edge_key(a, b);
    if (sos_sign(field[a]) == sos_sign(field[b])) return nullptr;
    auto it = cross_pt.find(key);
    if (it == cross_pt.end()) {
      double fa = field[a], fb = field[b];
      double t = fa / (fa - fb);  // fa, fb have opposite sos signs
      t = std::clamp(t, 0.0, 1.0);
      Crossing c;
      c.p = mesh.nodes[a] + t * (mesh.nodes[b] - mesh.nodes[a]);
      auto bit = bmap.find(key);
      if (bit != bmap.end()) {
        c.on_boundary = true;
        c.cond = bit->second->condition;
        c.arc_index = bit->second->arc_index;
        c.local_h = dist(mesh.nodes[a], mesh.nodes[b]);
      }
      it = cross_pt.emplace(key, c).first;
    }
    return &it->second;
  };

  // Each triangle with mixed signs contributes one segment between its two
  // crossed edges.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> adj;
  std::vector<std::array<std::pair<int, int>, 2>> segments;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    std::vector<std::pair<int, int>> crossed;
    for (int i = 0; i < 3; ++i) {
      int a = tr[i], b = tr[(i + 1) % 3];
      if (crossing_of(a, b)) crossed.push_back(edge_key(a, b));
    }
    if (crossed.size() != 2) continue;  // 0 = untouched (sos forbids 1 or 3)
    adj[crossed[0]].push_back(crossed[1]);
    adj[crossed[1]].push_back(crossed[0]);
    segments.push_back({crossed[0], crossed[1]});
  }

  // Walk chains. Endpoints are crossings with degree 1 (boundary edges).
  std::map<std::pair<int, int>, bool> used;
  auto walk = [&](std::pair<int, int> start) {
    std::vector<std::pair<int, int>> chain{start};
    used[start] = true;
    auto cur = start;
    auto prev = std::make_pair(-1, -1);
    while (true) {
      const auto& nbrs = adj[cur];
      std::pair<int, int> nxt{-1, -1};
      for (const auto& n : nbrs)
        if (n != prev && !used.count(n)) {
          nxt = n;
          break;
        }
      if (nxt.first < 0) break;
      chain.push_back(nxt);
      used[nxt] = true;
      prev = cur;
      cur = nxt;
    }
    return chain;
  };

  auto classify_end = [&](const Crossing& c, ArcEnd& kind, int& vertex,
                          int& arc_idx) {
    if (!c.on_boundary) {
      kind = ArcEnd::InteriorJunction;  // chain stopped inside: near-meeting
      return;
    }
    kind = c.cond == Condition::Neumann ? ArcEnd::OnN : ArcEnd::OnD;
    arc_idx = c.arc_index;
    for (const auto& v : mesh.vertices)
      if (dist(v.position, c.p) <= opts.snap_factor * c.local_h) {
        kind = ArcEnd::AtVertex;
        vertex = v.id;
        break;
      }
  };

  auto emit = [&](const std::vector<std::pair<int, int>>& chain, bool loop) {
    NodalArc arc;
    for (const auto& key : chain) arc.points.push_back(cross_pt.at(key).p);
    if (loop) {
      arc.points.push_back(arc.points.front());
      arc.start = arc.end = ArcEnd::Loop;
    } else {
      classify_end(cross_pt.at(chain.front()), arc.start, arc.start_vertex,
                   arc.start_arc_index);
      classify_end(cross_pt.at(chain.back()), arc.end, arc.end_vertex,
                   arc.end_arc_index);
    }
    out.arcs.push_back(std::move(arc));
  };

  // Open chains first (start from degree-1 crossings = boundary edges).
  for (const auto& [key, c] : cross_pt) {
    if (used.count(key)) continue;
    if (adj[key].size() == 1) emit(walk(key), false);
  }
  // Remaining are loops.
  for (const auto& [key, c] : cross_pt) {
    if (used.count(key) || adj[key].empty()) continue;
    emit(walk(key), true);
  }
  return out;
}

int arcs_ending_at_vertex(const NodalGraph& graph, int vertex_id) {
  int n = 0;
  for (const auto& a : graph.arcs) {
    if (a.start == ArcEnd::AtVertex && a.start_vertex == vertex_id) ++n;
    if (a.end == ArcEnd::AtVertex && a.end_vertex == vertex_id) ++n;
  }
  return n;
}

}  // namespace hotspots
