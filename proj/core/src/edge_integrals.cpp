#include "hotspots/edge_integrals.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace hotspots {

namespace {

struct Run {
  std::vector<int> nodes;
  std::vector<double> s;
  Point tangent;
};

// Straight runs (split at spec corners) of a boundary arc chain.
std::vector<Run> straight_runs(const Mesh& mesh, int arc_index) {
  std::vector<int> chain = boundary_chain(mesh, arc_index);
  std::set<int> corners(mesh.vertex_node.begin(), mesh.vertex_node.end());
  std::vector<std::vector<int>> parts;
  std::vector<int> cur{chain.front()};
  for (size_t i = 1; i < chain.size(); ++i) {
    cur.push_back(chain[i]);
    if (corners.count(chain[i]) && i + 1 < chain.size()) {
      parts.push_back(cur);
      cur = {chain[i]};
    }
  }
  parts.push_back(cur);
  std::vector<Run> runs;
  for (auto& part : parts) {
    if (part.size() < 2) continue;
    Run r;
    r.nodes = part;
    r.s.assign(part.size(), 0.0);
    for (size_t i = 1; i < part.size(); ++i)
      r.s[i] = r.s[i - 1] + dist(mesh.nodes[part[i - 1]], mesh.nodes[part[i]]);
    r.tangent = normalized(mesh.nodes[part.back()] - mesh.nodes[part.front()]);
    runs.push_back(std::move(r));
  }
  return runs;
}

double interp_at(const std::vector<double>& s, const std::vector<double>& v,
                 double sq) {
  auto it = std::upper_bound(s.begin(), s.end(), sq);
  size_t i = std::clamp<size_t>(it - s.begin(), 1, s.size() - 1);
  double t = (sq - s[i - 1]) / (s[i] - s[i - 1]);
  return (1 - t) * v[i - 1] + t * v[i];
}

}  // namespace

TaoIdentityResult tao_identity_check(const EigenPair& eig, const Mesh& mesh,
                                     const RecoveredGradient& g, int arc_index,
                                     Point p, Point q,
                                     const DerivativeFieldSpec& l) {
  if (l.kind != DerivativeFieldSpec::Kind::Constant)
    throw IdentityError("identity requires a constant field");
  Point L = l.direction_at({0, 0});

  // Locate the straight run containing both endpoints.
  const Run* run = nullptr;
  auto runs = straight_runs(mesh, arc_index);
  double sp = 0, sq = 0;
  for (const auto& r : runs) {
    Point a = mesh.nodes[r.nodes.front()];
    double len = r.s.back();
    double ap = dot(p - a, r.tangent), aq = dot(q - a, r.tangent);
    double op = std::abs(cross(r.tangent, p - a)), oq = std::abs(cross(r.tangent, q - a));
    double tol = 1e-6 * std::max(1.0, len);
    if (ap >= -tol && ap <= len + tol && aq >= -tol && aq <= len + tol &&
        op <= tol && oq <= tol) {
      run = &r;
      sp = std::clamp(ap, 0.0, len);
      sq = std::clamp(aq, 0.0, len);
      break;
    }
  }
  if (!run) throw IdentityError("points do not lie on one straight Neumann edge");

  Point tangent = run->tangent;
  Point nu{tangent.y, -tangent.x};  // outward for a ccw loop

  // Nodal Lu and its recovered normal derivative along the run.
  Eigen::VectorXd lu(mesh.nodes.size());
  for (size_t n = 0; n < mesh.nodes.size(); ++n)
    lu[n] = L.x * g.nodal_x[n] + L.y * g.nodal_y[n];
  RecoveredGradient glu = recover_gradient(lu, mesh);

  std::vector<double> integrand(run->nodes.size()), uvals(run->nodes.size());
  for (size_t i = 0; i < run->nodes.size(); ++i) {
    int n = run->nodes[i];
    double dn = dot(glu.at_node(n), nu);
    integrand[i] = lu[n] * dn;
    uvals[i] = eig.u[n];
  }

  double s0 = std::min(sp, sq), s1 = std::max(sp, sq);
  double orient = sq >= sp ? 1.0 : -1.0;  // gamma' = orient * tangent

  // Composite trapezoid over [s0, s1] with partial end segments.
  double lhs = 0;
  const auto& s = run->s;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    double a = std::max(s[i], s0), b = std::min(s[i + 1], s1);
    if (b <= a) continue;
    double fa = interp_at(s, integrand, a), fb = interp_at(s, integrand, b);
    lhs += 0.5 * (fa + fb) * (b - a);
  }
  lhs *= orient;

  double up = interp_at(s, uvals, sp), uq2 = interp_at(s, uvals, sq);
  double rhs = -0.5 * eig.lambda1 * dot(L, orient * tangent) * dot(L, nu) *
               (uq2 * uq2 - up * up);

  TaoIdentityResult out;
  out.lhs = lhs;
  out.rhs = rhs;
  double umax = eig.u.cwiseAbs().maxCoeff();
  out.rel_gap = std::abs(lhs - rhs) /
                (std::abs(rhs) + eig.lambda1 * umax * umax * 1e-6);
  return out;
}

std::vector<ComponentIntegral> sign_component_check(
    const Eigen::VectorXd& field, const Mesh& mesh, const DerivativeFieldSpec& x,
    const SignComponentOptions& opts) {
  const size_t nt = mesh.triangles.size();
  // Element signs from barycenter values (exact zeros count positive).
  std::vector<int> sign(nt);
  for (size_t t = 0; t < nt; ++t) {
    const auto& tr = mesh.triangles[t];
    double mean = (field[tr[0]] + field[tr[1]] + field[tr[2]]) / 3.0;
    sign[t] = mean >= 0 ? 1 : -1;
  }

  // Union-find across interior edges joining same-sign elements.
  std::vector<int> parent(nt);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  for (size_t t = 0; t < nt; ++t) {
    const auto& tr = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      auto key = std::make_pair(std::min(tr[i], tr[(i + 1) % 3]),
                                std::max(tr[i], tr[(i + 1) % 3]));
      edge_tris[key].push_back(static_cast<int>(t));
    }
  }
  for (const auto& [key, ts] : edge_tris)
    if (ts.size() == 2 && sign[ts[0]] == sign[ts[1]]) {
      int ra = find(ts[0]), rb = find(ts[1]);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }

  std::map<int, int> comp_ids;  // root -> compact id
  std::vector<std::vector<int>> comp_elems;
  for (size_t t = 0; t < nt; ++t) {
    int r = find(static_cast<int>(t));
    auto it = comp_ids.find(r);
    if (it == comp_ids.end()) {
      it = comp_ids.emplace(r, static_cast<int>(comp_elems.size())).first;
      comp_elems.emplace_back();
    }
    comp_elems[it->second].push_back(static_cast<int>(t));
  }

  // Boundary edge -> owning triangle.
  std::map<std::pair<int, int>, int> bedge_tri;
  for (const auto& e : mesh.boundary_edges) {
    auto key = std::make_pair(std::min(e.a, e.b), std::max(e.a, e.b));
    auto it = edge_tris.find(key);
    if (it != edge_tris.end() && it->second.size() == 1)
      bedge_tri[key] = it->second[0];
  }

  // Endpoints of the Dirichlet closure (mixed corners) for graded quadrature.
  std::vector<Point> dbar_endpoints;
  for (const auto& v : mesh.vertices)
    if (v.vtype == VertexType::MixedVertex) dbar_endpoints.push_back(v.position);

  auto field_tangent_to_edge = [&](const BoundaryEdge& e) {
    Point a = mesh.nodes[e.a], b = mesh.nodes[e.b];
    Point t = normalized(b - a);
    if (x.kind == DerivativeFieldSpec::Kind::Constant)
      return std::abs(cross(x.direction_at(a), t)) <= 1e-9;
    // Rotational fields are tangent to a line iff the center lies on it.
    double off = std::abs(cross(t, x.center - a));
    return off <= 1e-9 * std::max(1.0, dist(a, b));
  };

  RecoveredGradient gf = recover_gradient(field, mesh);
  double field_max = field.cwiseAbs().maxCoeff();

  std::vector<ComponentIntegral> out;
  for (size_t c = 0; c < comp_elems.size(); ++c) {
    if (comp_elems[c].size() == nt) continue;  // int(Omega \ U) empty
    ComponentIntegral ci;
    ci.component_id = static_cast<int>(c);
    ci.n_elements = static_cast<int>(comp_elems[c].size());
    std::set<int> in_comp(comp_elems[c].begin(), comp_elems[c].end());

    bool admissible = true;
    double max_phi_on_edges = 0;
    for (const auto& e : mesh.boundary_edges) {
      auto key = std::make_pair(std::min(e.a, e.b), std::max(e.a, e.b));
      auto bt = bedge_tri.find(key);
      if (bt == bedge_tri.end() || !in_comp.count(bt->second)) continue;
      if (e.condition == Condition::Dirichlet) {
        ci.touches_dirichlet = true;
        if (!field_tangent_to_edge(e)) admissible = false;
      }
      Point a = mesh.nodes[e.a], b = mesh.nodes[e.b];
      Point t = normalized(b - a);
      Point nu{t.y, -t.x};
      double len = dist(a, b);

      // Piecewise-linear integrand data along the edge.
      double phi_a = field[e.a], phi_b = field[e.b];
      double dn_a = dot(gf.at_node(e.a), nu), dn_b = dot(gf.at_node(e.b), nu);
      max_phi_on_edges = std::max({max_phi_on_edges, std::abs(phi_a), std::abs(phi_b)});

      bool near_singular = false;
      for (const auto& vp : dbar_endpoints)
        if (dist(vp, a) < opts.singular_radius_factor * mesh.h_target ||
            dist(vp, b) < opts.singular_radius_factor * mesh.h_target)
          near_singular = true;

      auto phi_at = [&](double tt) { return (1 - tt) * phi_a + tt * phi_b; };
      auto dn_at = [&](double tt) { return (1 - tt) * dn_a + tt * dn_b; };
      if (!near_singular) {
        ci.integral += 0.5 * (phi_a * dn_a + phi_b * dn_b) * len;
      } else {
        // Graded trapezoid with ratio 1/2 toward the closer endpoint.
        ci.graded_quadrature = true;
        bool toward_a = false;
        double best = 1e300;
        for (const auto& vp : dbar_endpoints) {
          if (dist(vp, a) < best) {
            best = dist(vp, a);
            toward_a = true;
          }
          if (dist(vp, b) < best) {
            best = dist(vp, b);
            toward_a = false;
          }
        }
        std::vector<double> ts{0.0, 1.0};
        double step = 0.5;
        for (int lev = 0; lev < opts.graded_levels; ++lev, step *= 0.5)
          ts.push_back(toward_a ? step : 1.0 - step);
        std::sort(ts.begin(), ts.end());
        for (size_t i = 0; i + 1 < ts.size(); ++i) {
          double t0 = ts[i], t1 = ts[i + 1];
          ci.integral += 0.5 *
                         (phi_at(t0) * dn_at(t0) + phi_at(t1) * dn_at(t1)) *
                         (t1 - t0) * len;
        }
      }
    }
    ci.admissible = admissible;
    ci.borderline = max_phi_on_edges <= opts.borderline_fraction * field_max;
    ci.positive = ci.integral > 0;
    out.push_back(ci);
  }
  return out;
}

}  // namespace hotspots
