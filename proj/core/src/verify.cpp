#include "hotspots/verify.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <numbers>
#include <sstream>

#include "hotspots/assembly.hpp"
#include "hotspots/nodal_graph.hpp"
#include "hotspots/report.hpp"

namespace hotspots {

namespace {
constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}
}  // namespace

const std::vector<std::pair<std::string, std::string>>& claim_registry() {
  static const std::vector<std::pair<std::string, std::string>> reg = {
      {"triangle.single-critical-point",
       "a first mixed eigenfunction on a labeled triangle has at most one "
       "critical point, and it lies on the Neumann part"},
      {"triangle.monotone-direction",
       "the route-specific constant field L satisfies Lu > 0 inside"},
      {"triangle.vertex-maximum",
       "with one Dirichlet edge and a non-obtuse (or isosceles obtuse) Neumann "
       "vertex, the critical set is empty and the maximum sits at that vertex"},
      {"triangle.longer-edge",
       "with one Dirichlet edge, an obtuse Neumann vertex and unequal legs, "
       "the unique critical point lies on the longer Neumann edge and is the "
       "global maximum"},
      {"triangle.unique-max-on-N",
       "with two Dirichlet edges the unique critical point on N is the global "
       "maximum"},
      {"graph.vertical-monotone",
       "on a graph domain with Dirichlet graph and Neumann base, -d_y u > 0 "
       "at every element barycenter"},
      {"graph.count-bound",
       "the number of critical points on the base is at most n = strict "
       "extrema of the profile plus flat intervals"},
      {"graph.extrema-parity",
       "local extrema on the base number at most (n+1)/2 for odd n, n/2 for "
       "even n"},
      {"graph.vertex-separation",
       "critical points on the base keep at least h away from the corners"},
      {"graph.no-interior",
       "no interior critical points on a graph domain"},
      {"rectangle.exclusion",
       "a rectangle with a single Dirichlet edge has a vanishing tangential "
       "derivative field and the full opposite edge critical"},
      {"rectangle.midline",
       "a rectangle with two opposite Dirichlet edges has its critical set on "
       "the segment joining the Neumann edge midpoints"},
      {"approx.monotone-lambda",
       "along a nested increasing exhaustion the first eigenvalue is "
       "nonincreasing"},
      {"approx.cauchy-gaps",
       "successive eigenvalue gaps along the exhaustion shrink by at least 2x"},
      {"approx.per-level-monotone",
       "each exhaustion level satisfies the vertical monotonicity check"},
      {"scan.no-interior-extrema",
       "simply connected domain with one straight Dirichlet segment: no "
       "interior extrema found at scan resolution"},
      {"identity.tao",
       "the tangential edge identity between critical points / Neumann "
       "vertices holds to quadrature accuracy"},
      {"positivity.component-integral",
       "component boundary integrals of phi d_nu(phi) are positive for "
       "admissible nodal components"},
      {"predicate.degree-agreement",
       "sector window predicates agree with traced arc incidence at corners"},
      {"eigen.positivity",
       "the computed first eigenfunction is nonnegative at the nodes"},
      {"eigen.gap", "the first eigenvalue is simple (positive Ritz gap)"},
  };
  return reg;
}

std::string claim_statement(const std::string& id) {
  for (const auto& [k, v] : claim_registry())
    if (k == id) return v;
  throw std::invalid_argument("unknown claim id: " + id);
}

void VerificationReport::add_claim(const std::string& id,
                                   const std::string& predicted,
                                   const std::string& observed,
                                   ClaimOutcome outcome) {
  claim_statement(id);  // validates the id
  claims.push_back({id, predicted, observed, outcome});
}

bool VerificationReport::passed() const {
  for (const auto& c : claims)
    if (c.outcome == ClaimOutcome::Fail) return false;
  return true;
}

int VerificationReport::inconclusive_count() const {
  int n = 0;
  for (const auto& c : claims)
    if (c.outcome == ClaimOutcome::Inconclusive) ++n;
  return n;
}

std::string to_string(ClaimOutcome o) {
  switch (o) {
    case ClaimOutcome::Pass: return "pass";
    case ClaimOutcome::Fail: return "FAIL";
    default: return "inconclusive";
  }
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << "case " << case_id << ": " << spec_summary << "\n";
  os << "  h=" << fmt(h) << " lambda1=" << fmt(lambda1) << " residual=" << fmt(residual)
     << "\n";
  for (const auto& c : claims)
    os << "  [" << to_string(c.outcome) << "] " << c.id << ": predicted "
       << c.predicted << ", observed " << c.observed << "\n";
  return os.str();
}

SolveArtifacts solve_domain(const PlanarDomainSpec& spec, double h, double tol) {
  SolveArtifacts a;
  a.mesh = triangulate(spec, h);
  auto [k, m] = assemble_stiffness_mass(a.mesh);
  auto dofs = build_dofmap(a.mesh);
  EigenSolveOptions opts;
  opts.tol = tol;
  a.eig = smallest_eigenpair(k, m, dofs, opts);
  a.grad = recover_gradient(a.eig, a.mesh);
  a.crit = find_critical_points(a.eig, a.mesh, a.grad);
  return a;
}

namespace {

ClaimOutcome pass_fail(bool ok) { return ok ? ClaimOutcome::Pass : ClaimOutcome::Fail; }

// Outward unit normal of a ccw-ordered edge (a -> b).
Point outward_normal(Point a, Point b) {
  Point t = normalized(b - a);
  return {t.y, -t.x};
}

double field_angle(Point d) { return std::atan2(d.y, d.x); }

}  // namespace

VerificationReport verify_triangle(const TriangleSpec& tri, double h,
                                   const VerifyOptions& opts) {
  VerificationReport rep;
  const auto& P = tri.corners;
  {
    std::ostringstream os;
    os << "triangle (" << fmt(P[0].x) << "," << fmt(P[0].y) << ") (" << fmt(P[1].x)
       << "," << fmt(P[1].y) << ") (" << fmt(P[2].x) << "," << fmt(P[2].y)
       << "), Dirichlet edges:";
    for (int e : tri.dirichlet_edges) os << " " << e;
    rep.spec_summary = os.str();
    rep.case_id = "triangle";
  }
  rep.h = h;

  auto art = solve_domain(tri.spec, h, opts.tol);
  rep.lambda1 = art.eig.lambda1;
  rep.residual = art.eig.residual;
  const auto& crit = art.crit;
  double umax = art.eig.u.maxCoeff();

  rep.add_claim("eigen.positivity", "min u >= -1e-8 max u",
                art.eig.positive ? "nonnegative" : "negative nodal values",
                pass_fail(art.eig.positive));

  // Theorem-level claim: at most one critical point, on N.
  int n_interior = 0, n_boundary = 0;
  for (const auto& p : crit.points)
    (p.kind == CritKind::Interior ? n_interior : n_boundary)++;
  bool single_on_n = n_interior == 0 && n_boundary <= 1 &&
                     crit.interval_critical_arcs.empty() && !crit.overflow;
  rep.add_claim("triangle.single-critical-point", "<=1, on N",
                fmt(n_boundary) + " on N, " + fmt(n_interior) + " interior",
                pass_fail(single_on_n));

  // Route and the pinned monotone direction.
  DerivativeFieldSpec L = DerivativeFieldSpec::constant(0);
  std::string route;
  if (tri.dirichlet_edges.size() == 2) {
    int ne = 3 - tri.dirichlet_edges[0] - tri.dirichlet_edges[1];
    Point a = P[ne], b = P[(ne + 1) % 3];
    bool obtuse_adjacent = tri.angles[ne] > kPi / 2 + opts.angle_tolerance ||
                           tri.angles[(ne + 1) % 3] > kPi / 2 + opts.angle_tolerance;
    if (!obtuse_adjacent) {
      route = "two-dirichlet-nonobtuse";
      L = DerivativeFieldSpec::constant(field_angle(outward_normal(a, b)));
    } else {
      route = "two-dirichlet-obtuse";
      // Interior bisector at the Dirichlet vertex (opposite the Neumann edge).
      int dv = (ne + 2) % 3;
      Point d1 = normalized(P[(dv + 1) % 3] - P[dv]);
      Point d2 = normalized(P[(dv + 2) % 3] - P[dv]);
      L = DerivativeFieldSpec::constant(field_angle(normalized(d1 + d2)));
    }
    auto mono = check_monotone(art.grad, art.mesh, L);
    rep.add_claim("triangle.monotone-direction", "min Lu > 0 (" + route + ")",
                  "min Lu = " + fmt(mono.min_value), pass_fail(mono.holds));
    bool unique_max =
        n_boundary == 1 && n_interior == 0 &&
        crit.points.size() == 1 &&
        crit.points[0].u_value >= umax * (1 - 5e-3);
    rep.add_claim("triangle.unique-max-on-N", "1 critical point = global max",
                  n_boundary == 1 ? "u(crit)/max u = " + fmt(crit.points[0].u_value / umax)
                                  : "no critical point found",
                  pass_fail(unique_max));
  } else {
    int nv = tri.neumann_vertex;
    int de = tri.dirichlet_edges[0];
    Point da = P[de], db = P[(de + 1) % 3];
    double beta = tri.angles[nv];
    // Neumann edges adjacent to the Neumann vertex.
    struct Leg {
      int edge;
      double len;
    };
    Leg legs[2] = {{(de + 1) % 3, dist(P[(de + 1) % 3], P[(de + 2) % 3])},
                   {(de + 2) % 3, dist(P[(de + 2) % 3], P[de])}};
    const Leg& longer = legs[0].len >= legs[1].len ? legs[0] : legs[1];
    const Leg& shorter = legs[0].len >= legs[1].len ? legs[1] : legs[0];
    bool isosceles =
        std::abs(legs[0].len - legs[1].len) <= opts.iso_tolerance * longer.len;

    if (beta <= kPi / 2 + opts.angle_tolerance) {
      route = "one-dirichlet-nonobtuse";
      L = DerivativeFieldSpec::constant(field_angle(Point{0, 0} - outward_normal(da, db)));
    } else {
      route = isosceles ? "one-dirichlet-obtuse-isosceles"
                        : "one-dirichlet-obtuse-scalene";
      Point ea = P[longer.edge], eb = P[(longer.edge + 1) % 3];
      L = DerivativeFieldSpec::constant(field_angle(outward_normal(ea, eb)));
    }
    auto mono = check_monotone(art.grad, art.mesh, L);
    rep.add_claim("triangle.monotone-direction", "min Lu > 0 (" + route + ")",
                  "min Lu = " + fmt(mono.min_value), pass_fail(mono.holds));

    bool expect_vertex_max = beta <= kPi / 2 + opts.angle_tolerance || isosceles;
    if (expect_vertex_max) {
      bool vmax = false;
      for (const auto& ve : crit.vertex_extrema)
        if (dist(ve.position, P[nv]) < 1e-9 && ve.is_global_max) vmax = true;
      bool ok = vmax && crit.points.empty();
      rep.add_claim("triangle.vertex-maximum",
                    "empty critical set, max at the Neumann vertex",
                    fmt(static_cast<double>(crit.points.size())) +
                        " critical points, vertex max " + (vmax ? "yes" : "no"),
                    pass_fail(ok));
    } else {
      // Scalene obtuse: one critical point on the longer Neumann edge.
      ClaimOutcome oc = ClaimOutcome::Fail;
      std::string obs;
      if (crit.points.size() == 1 &&
          crit.points[0].kind == CritKind::OnNeumannBoundary &&
          crit.points[0].arc_index == longer.edge &&
          crit.points[0].u_value >= umax * (1 - 5e-3)) {
        oc = ClaimOutcome::Pass;
        obs = "on edge " + std::to_string(longer.edge) + ", u/max = " +
              fmt(crit.points[0].u_value / umax);
      } else if (crit.points.empty()) {
        // The displacement from the vertex shrinks to zero toward the
        // right-angle and isosceles boundaries of this route; below mesh
        // resolution the detector sees the vertex maximum instead.
        int argmax = 0;
        for (int i = 1; i < art.eig.u.size(); ++i)
          if (art.eig.u[i] > art.eig.u[argmax]) argmax = i;
        double d = dist(art.mesh.nodes[argmax], P[nv]);
        if (d <= 4 * h) {
          oc = ClaimOutcome::Inconclusive;
          obs = "no resolved critical point; max within " + fmt(d / h) +
                "h of the Neumann vertex";
        } else {
          obs = "no critical point; max " + fmt(d) + " from vertex";
        }
      } else {
        obs = fmt(static_cast<double>(crit.points.size())) +
              " critical points, first on edge " +
              std::to_string(crit.points.empty() ? -1 : crit.points[0].arc_index);
      }
      rep.add_claim("triangle.longer-edge",
                    "1 critical point on edge " + std::to_string(longer.edge) +
                        " (len " + fmt(longer.len) + " vs " + fmt(shorter.len) + ")",
                    obs, oc);
    }
  }
  rep.case_id += ":" + route;
  return rep;
}

VerificationReport verify_graph_domain(const GraphFunction& f, double h,
                                       const VerifyOptions& opts) {
  VerificationReport rep;
  rep.case_id = "graph-domain";
  {
    std::ostringstream os;
    os << "profile with " << f.x.size() << " breakpoints on [" << fmt(f.a()) << ","
       << fmt(f.b()) << "], n = " << count_bound_n(f);
    rep.spec_summary = os.str();
  }
  rep.h = h;

  bool constant_profile = true;
  for (double v : f.y)
    if (v != f.y.front()) constant_profile = false;

  auto spec = graph_domain_from_function(f);
  auto art = solve_domain(spec, h, opts.tol);
  rep.lambda1 = art.eig.lambda1;
  rep.residual = art.eig.residual;

  rep.add_claim("eigen.positivity", "min u >= -1e-8 max u",
                art.eig.positive ? "nonnegative" : "negative nodal values",
                pass_fail(art.eig.positive));

  auto mono = check_monotone(art.grad, art.mesh,
                             DerivativeFieldSpec::constant(-kPi / 2));
  rep.add_claim("graph.vertical-monotone", "min(-d_y u) > 0 at barycenters",
                "min = " + fmt(mono.min_value), pass_fail(mono.holds));

  int n_interior = 0;
  for (const auto& p : art.crit.points)
    if (p.kind == CritKind::Interior) ++n_interior;
  rep.add_claim("graph.no-interior", "0", fmt(n_interior), pass_fail(n_interior == 0));

  auto bound = count_critical_on_N(art.crit, f);
  rep.add_claim("graph.count-bound",
                "k <= n = " + std::to_string(bound.bound_n),
                "k = " + std::to_string(bound.k), pass_fail(bound.k <= bound.bound_n));
  int extrema_bound =
      bound.bound_n % 2 == 1 ? (bound.bound_n + 1) / 2 : bound.bound_n / 2;
  rep.add_claim("graph.extrema-parity",
                "extrema <= " + std::to_string(extrema_bound),
                "extrema = " + std::to_string(bound.extrema_count),
                pass_fail(bound.extrema_count <= extrema_bound));

  double min_sep = std::numeric_limits<double>::infinity();
  for (const auto& p : art.crit.points)
    for (const auto& v : art.mesh.vertices)
      min_sep = std::min(min_sep, dist(p.location, v.position));
  bool sep_ok = art.crit.points.empty() || min_sep >= h;
  rep.add_claim("graph.vertex-separation", "min distance >= h",
                art.crit.points.empty() ? "no critical points"
                                        : "min distance = " + fmt(min_sep),
                pass_fail(sep_ok));

  if (constant_profile) {
    // Route the excluded rectangle: relabel with a single Dirichlet edge and
    // check the degenerate tangential field plus the full opposite edge.
    double width = f.b() - f.a(), height = f.y.front();
    std::vector<BoundaryArc> arcs;
    arcs.push_back({{{f.a(), 0}, {f.b(), 0}}, Condition::Neumann, "bottom"});
    arcs.push_back({{{f.b(), 0}, {f.b(), height}}, Condition::Neumann, "right"});
    arcs.push_back({{{f.b(), height}, {f.a(), height}}, Condition::Dirichlet, "top"});
    arcs.push_back({{{f.a(), height}, {f.a(), 0}}, Condition::Neumann, "left"});
    auto rect = make_domain(arcs);
    auto rart = solve_domain(rect, h, opts.tol);
    auto xu = directional_field(rart.grad, rart.mesh,
                                DerivativeFieldSpec::constant(0));
    double thresh = 2.0 * h * rart.eig.lambda1 * rart.eig.u.maxCoeff();
    NodalGraphOptions ngo;
    ngo.degenerate_threshold = thresh;
    auto ng = nodal_graph(xu, rart.mesh, ngo);
    bool bottom_interval = false;
    for (int a : rart.crit.interval_critical_arcs)
      if (rart.mesh.arc_ids[a] == "bottom") bottom_interval = true;
    rep.add_claim("rectangle.exclusion",
                  "tangential field degenerate; bottom edge critical",
                  std::string("degenerate=") + (ng.degenerate ? "yes" : "no") +
                      ", bottom interval=" + (bottom_interval ? "yes" : "no"),
                  pass_fail(ng.degenerate && bottom_interval));
    (void)width;
  }
  return rep;
}

VerificationReport domain_approximation_experiment(const GraphFunction& f,
                                                   int depths, double h,
                                                   const VerifyOptions& opts) {
  if (depths < 2) throw std::invalid_argument("need at least 2 levels");
  const size_t n = f.x.size();
  // Level k keeps every 2^(depths-1-k)-th breakpoint; the finest level is f.
  std::vector<GraphFunction> levels;
  for (int k = 0; k < depths; ++k) {
    size_t stride = static_cast<size_t>(1) << (depths - 1 - k);
    GraphFunction g;
    for (size_t i = 0; i < n; i += stride) {
      g.x.push_back(f.x[i]);
      g.y.push_back(f.y[i]);
    }
    if (g.x.back() != f.x.back()) {
      g.x.push_back(f.x.back());
      g.y.push_back(f.y.back());
    }
    g.validate();
    levels.push_back(std::move(g));
  }
  // Nestedness: each level must lie under the next at all union breakpoints.
  for (int k = 0; k + 1 < depths; ++k)
    for (double xq : f.x) {
      if (levels[k].eval(xq) > levels[k + 1].eval(xq) + 1e-12)
        throw std::invalid_argument(
            "approximation levels are not nested from inside");
    }

  VerificationReport rep;
  rep.case_id = "approx-experiment";
  rep.spec_summary =
      "nested exhaustion, " + std::to_string(depths) + " levels, finest with " +
      std::to_string(n) + " breakpoints";
  rep.h = h;

  std::vector<double> lambdas;
  bool all_mono = true;
  for (const auto& g : levels) {
    auto art = solve_domain(graph_domain_from_function(g), h, opts.tol);
    lambdas.push_back(art.eig.lambda1);
    auto mono =
        check_monotone(art.grad, art.mesh, DerivativeFieldSpec::constant(-kPi / 2));
    all_mono = all_mono && mono.holds;
  }
  rep.lambda1 = lambdas.back();

  bool nonincreasing = true;
  for (size_t i = 0; i + 1 < lambdas.size(); ++i)
    if (lambdas[i + 1] > lambdas[i] + 1e-8) nonincreasing = false;
  std::ostringstream ls;
  for (double l : lambdas) ls << fmt(l) << " ";
  rep.add_claim("approx.monotone-lambda", "nonincreasing within 1e-8", ls.str(),
                pass_fail(nonincreasing));

  bool gaps_ok = true;
  std::ostringstream gs;
  for (size_t i = 0; i + 2 < lambdas.size(); ++i) {
    double g0 = lambdas[i] - lambdas[i + 1];
    double g1 = lambdas[i + 1] - lambdas[i + 2];
    gs << fmt(g0) << "->" << fmt(g1) << " ";
    if (!(g1 <= 0.5 * g0 + 1e-12)) gaps_ok = false;
  }
  rep.add_claim("approx.cauchy-gaps", "each gap <= half the previous", gs.str(),
                pass_fail(gaps_ok));
  rep.add_claim("approx.per-level-monotone", "all levels pass",
                all_mono ? "all pass" : "violation", pass_fail(all_mono));
  return rep;
}

namespace {

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

}  // namespace

ScanSummary scan_conjecture(ScanFamily family, int budget, unsigned seed, double h) {
  ScanSummary out;
  out.family = family;
  out.budget = budget;
  out.seed = seed;
  for (int i = 0; i < budget; ++i) {
    int idx = static_cast<int>(seed) * budget + i + 1;
    double q1 = halton(idx, 2), q2 = halton(idx, 3), q3 = halton(idx, 5);
    ScanSample sample;
    sample.sample_index = i;
    try {
      PlanarDomainSpec spec;
      std::ostringstream shape;
      if (family == ScanFamily::Triangle) {
        Point p0{0, 0}, p1{1, 0};
        Point p2{0.15 + 0.7 * q1, 0.15 + 0.85 * q2};
        auto tri = triangle_spec(p0, p1, p2, {0});
        spec = tri.spec;
        shape << "triangle apex (" << fmt(p2.x) << "," << fmt(p2.y) << ")";
      } else if (family == ScanFamily::ConvexQuad) {
        // Convex position: four points in angular order on a wobbled circle.
        double th[4];
        double base[4] = {0.0, kPi / 2, kPi, 3 * kPi / 2};
        double w[4] = {q1, q2, q3, halton(idx, 7)};
        std::vector<Point> pts;
        for (int k = 0; k < 4; ++k) {
          th[k] = base[k] + (w[k] - 0.5) * 0.8;
          double r = 0.7 + 0.3 * halton(idx, 11 + k);
          pts.push_back({r * std::cos(th[k]), r * std::sin(th[k])});
        }
        bool convex = true;
        for (int k = 0; k < 4; ++k) {
          Point a = pts[k], b = pts[(k + 1) % 4], c = pts[(k + 2) % 4];
          if (cross(b - a, c - b) <= 0) convex = false;
        }
        if (!convex) {
          sample.failed = true;
          sample.error = "sample not convex; skipped";
          out.samples.push_back(sample);
          ++out.failures;
          continue;
        }
        std::vector<BoundaryArc> arcs;
        for (int k = 0; k < 4; ++k) {
          BoundaryArc arc;
          arc.polyline = {pts[k], pts[(k + 1) % 4]};
          arc.condition = k == 0 ? Condition::Dirichlet : Condition::Neumann;
          arc.arc_id = "edge" + std::to_string(k);
          arcs.push_back(arc);
        }
        spec = make_domain(arcs);
        shape << "convex quad";
      } else {
        // Thin chevron: nonconvex quadrilateral, Dirichlet on one outer edge.
        double depth = 0.1 + 0.5 * q1;   // how far the notch cuts in
        double height = 0.3 + 0.5 * q2;  // overall height
        std::vector<Point> pts{{0, 0}, {1, -height}, {2, 0}, {1, -height * depth}};
        std::vector<BoundaryArc> arcs;
        for (int k = 0; k < 4; ++k) {
          BoundaryArc arc;
          arc.polyline = {pts[k], pts[(k + 1) % 4]};
          arc.condition = k == 0 ? Condition::Dirichlet : Condition::Neumann;
          arc.arc_id = "edge" + std::to_string(k);
          arcs.push_back(arc);
        }
        spec = make_domain(arcs);
        shape << "thin chevron depth " << fmt(depth) << " height " << fmt(height);
      }
      sample.shape = shape.str();

      auto art = solve_domain(spec, h);
      sample.lambda1 = art.eig.lambda1;
      MeshLocator loc(art.mesh);
      classify_indices(art.crit, art.eig, art.mesh, loc);
      for (const auto& p : art.crit.points) {
        if (p.kind != CritKind::Interior) continue;
        ++sample.interior_critical;
        if (p.index == IndexValue::PlusOne) ++sample.interior_extrema;
      }
      out.total_interior_extrema += sample.interior_extrema;
      if (sample.interior_critical > 0) out.candidates.push_back(sample);
    } catch (const std::exception& e) {
      sample.failed = true;
      sample.error = e.what();
      ++out.failures;
    }
    out.samples.push_back(sample);
  }
  return out;
}

PredicateAgreement degree_predicate_agreement(
    const SolveArtifacts& art, const std::vector<DerivativeFieldSpec>& fields) {
  PredicateAgreement out;
  const Mesh& mesh = art.mesh;
  double umax = art.eig.u.maxCoeff();
  double h = mesh.h_target;

  // a1 for Neumann vertices in the obtuse band, where the window clause
  // depends on it.
  std::map<int, bool> a1_zero;
  for (const auto& v : mesh.vertices) {
    if (v.vtype != VertexType::NeumannVertex) continue;
    if (v.angle_beta <= kPi / 2 || v.angle_beta >= kPi) continue;
    try {
      FitOptions fo;
      fo.n_max = 3;
      auto fit = fit_vertex_expansion(art.eig, mesh, v, fo);
      a1_zero[v.id] = std::abs(fit.coefficients[1]) <= 1e-4 * umax;
    } catch (const FitError&) {
      // leave unset: predicate calls treat the vertex as inconclusive below
    }
  }

  for (const auto& field : fields) {
    auto xu = directional_field(art.grad, mesh, field);
    NodalGraphOptions ngo;
    ngo.degenerate_threshold = 2.0 * h * art.eig.lambda1 * umax;
    auto graph = nodal_graph(xu, mesh, ngo);
    if (graph.degenerate) continue;  // no traced zero set to compare against
    double xu_max = xu.cwiseAbs().maxCoeff();

    for (const auto& v : mesh.vertices) {
      ++out.pairs;

      DegreePrediction pred;
      try {
        bool a1z = false;
        if (v.vtype == VertexType::NeumannVertex && v.angle_beta > kPi / 2 &&
            v.angle_beta < kPi) {
          auto it = a1_zero.find(v.id);
          if (it == a1_zero.end()) {
            ++out.inconclusive;
            continue;
          }
          a1z = it->second;
        }
        pred = degree_one_predicate(v, field, a1z);
      } catch (const std::invalid_argument&) {
        ++out.inconclusive;
        continue;
      }
      if (pred == DegreePrediction::Inconclusive) {
        ++out.inconclusive;
        continue;
      }

      // Trace confidence: the field must be resolved near the vertex.
      double local_max = 0;
      for (size_t n = 0; n < mesh.nodes.size(); ++n)
        if (dist(mesh.nodes[n], v.position) <= 4 * h)
          local_max = std::max(local_max, std::abs(xu[n]));
      if (local_max <= 1e-3 * xu_max) {
        ++out.inconclusive;
        continue;
      }
      int incident = arcs_ending_at_vertex(graph, v.id);
      bool ambiguous = false;
      for (const auto& arc : graph.arcs) {
        for (const Point* ep : {&arc.points.front(), &arc.points.back()}) {
          double dv = dist(*ep, v.position);
          if (dv > 0 && dv <= 2 * h) {
            bool counted = (arc.start == ArcEnd::AtVertex &&
                            arc.start_vertex == v.id && ep == &arc.points.front()) ||
                           (arc.end == ArcEnd::AtVertex && arc.end_vertex == v.id &&
                            ep == &arc.points.back());
            if (!counted) ambiguous = true;
          }
        }
      }
      if (ambiguous) {
        ++out.inconclusive;
        continue;
      }
      bool traced = incident >= 1;
      bool predicted = pred == DegreePrediction::IsDegreeOneVertex;
      if (traced == predicted)
        ++out.matches;
      else
        ++out.contradictions;
    }
  }
  return out;
}

int hotspots_thread_cap() {
  const char* env = std::getenv("HOTSPOTS_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n > 0 ? n : 1;
}

std::vector<VerificationReport> run_cases(
    const std::vector<std::function<VerificationReport()>>& cases) {
  int cap = hotspots_thread_cap();
  std::vector<VerificationReport> out(cases.size());
  if (cap <= 1) {
    for (size_t i = 0; i < cases.size(); ++i) out[i] = cases[i]();
    return out;
  }
  size_t next = 0;
  while (next < cases.size()) {
    size_t batch = std::min<size_t>(cap, cases.size() - next);
    std::vector<std::future<VerificationReport>> futs;
    for (size_t k = 0; k < batch; ++k)
      futs.push_back(std::async(std::launch::async, cases[next + k]));
    for (size_t k = 0; k < batch; ++k) out[next + k] = futs[k].get();
    next += batch;
  }
  return out;
}

}  // namespace hotspots
