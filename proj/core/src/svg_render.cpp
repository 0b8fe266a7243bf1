#include "hotspots/svg_render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace hotspots {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Compact diverging-free sequential map (dark blue -> yellow).
void colormap(double t, int& r, int& g, int& b) {
  t = std::clamp(t, 0.0, 1.0);
  r = static_cast<int>(std::round(255 * std::clamp(1.6 * t - 0.3, 0.0, 1.0)));
  g = static_cast<int>(std::round(255 * std::clamp(1.2 * t, 0.0, 1.0)));
  b = static_cast<int>(std::round(255 * std::clamp(0.9 - 0.8 * t, 0.05, 1.0)));
}

}  // namespace

std::string render_solution_svg(const Mesh& mesh, const Eigen::VectorXd& u,
                                const RenderOverlays& overlays,
                                const RenderOptions& opts) {
  return render_solution_svg(mesh.nodes, mesh.triangles, mesh.boundary_edges, u,
                             overlays, opts);
}

std::string render_solution_svg(const std::vector<Point>& nodes,
                                const std::vector<std::array<int, 3>>& triangles,
                                const std::vector<BoundaryEdge>& boundary,
                                const Eigen::VectorXd& u,
                                const RenderOverlays& overlays,
                                const RenderOptions& opts) {
  Point lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const auto& p : nodes) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  double w = std::max(hi.x - lo.x, 1e-12), hgt = std::max(hi.y - lo.y, 1e-12);
  double margin = 0.04 * std::max(w, hgt);
  double scale = opts.width_px / (w + 2 * margin);
  double height_px = (hgt + 2 * margin) * scale;
  auto X = [&](double x) { return (x - lo.x + margin) * scale; };
  auto Y = [&](double y) { return height_px - (y - lo.y + margin) * scale; };

  double umin = u.size() ? u.minCoeff() : 0.0;
  double umax = u.size() ? u.maxCoeff() : 1.0;
  double span = std::max(umax - umin, 1e-300);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(opts.width_px)
      << "\" height=\"" << num(height_px) << "\" viewBox=\"0 0 "
      << num(opts.width_px) << " " << num(height_px) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  svg << "<g stroke=\"none\">\n";
  for (const auto& tr : triangles) {
    double mean = (u[tr[0]] + u[tr[1]] + u[tr[2]]) / 3.0;
    int r, g, b;
    colormap((mean - umin) / span, r, g, b);
    char color[10];
    std::snprintf(color, sizeof color, "#%02x%02x%02x", r, g, b);
    svg << "<polygon points=\"";
    for (int k = 0; k < 3; ++k) {
      if (k) svg << ' ';
      svg << num(X(nodes[tr[k]].x)) << ',' << num(Y(nodes[tr[k]].y));
    }
    svg << "\" fill=\"" << color << "\"";
    if (opts.draw_mesh_edges) svg << " stroke=\"#00000022\" stroke-width=\"0.4\"";
    svg << "/>\n";
  }
  svg << "</g>\n";

  // Boundary with condition coloring: Dirichlet red, Neumann blue.
  svg << "<g fill=\"none\" stroke-width=\"2\">\n";
  for (const auto& e : boundary) {
    const char* color = e.condition == Condition::Dirichlet ? "#d62728" : "#1f77b4";
    svg << "<line x1=\"" << num(X(nodes[e.a].x)) << "\" y1=\"" << num(Y(nodes[e.a].y))
        << "\" x2=\"" << num(X(nodes[e.b].x)) << "\" y2=\"" << num(Y(nodes[e.b].y))
        << "\" stroke=\"" << color << "\"/>\n";
  }
  svg << "</g>\n";

  if (!overlays.arcs.empty()) {
    svg << "<g fill=\"none\" stroke=\"#111111\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"5,3\">\n";
    for (const auto& arc : overlays.arcs) {
      svg << "<polyline points=\"";
      for (size_t i = 0; i < arc.points.size(); ++i) {
        if (i) svg << ' ';
        svg << num(X(arc.points[i].x)) << ',' << num(Y(arc.points[i].y));
      }
      svg << "\"/>\n";
    }
    svg << "</g>\n";
  }

  for (const auto& p : overlays.critical_points) {
    const char* color = p.kind == CritKind::Interior ? "#ff00ff" : "#00cc44";
    svg << "<circle cx=\"" << num(X(p.location.x)) << "\" cy=\""
        << num(Y(p.location.y)) << "\" r=\"5\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<circle cx=\"" << num(X(p.location.x)) << "\" cy=\""
        << num(Y(p.location.y)) << "\" r=\"1.2\" fill=\"" << color << "\"/>\n";
  }
  for (const auto& v : overlays.vertex_extrema) {
    double cx = X(v.position.x), cy = Y(v.position.y);
    svg << "<path d=\"M " << num(cx - 5) << ' ' << num(cy) << " L " << num(cx + 5)
        << ' ' << num(cy) << " M " << num(cx) << ' ' << num(cy - 5) << " L "
        << num(cx) << ' ' << num(cy + 5)
        << "\" stroke=\"#ff8800\" stroke-width=\"2\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace hotspots
