// hotspots: solve first mixed Dirichlet-Neumann eigenproblems on planar
// polygons and graph domains, locate critical points of the eigenfunction,
// and run the verification suites.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hotspots/assembly.hpp"
#include "hotspots/io.hpp"
#include "hotspots/run_config.hpp"
#include "hotspots/svg_render.hpp"
#include "hotspots/verify.hpp"

namespace fs = std::filesystem;
using namespace hotspots;

namespace {

RunConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config: " + path);
  nlohmann::json j;
  f >> j;
  return RunConfig::from_json(j);
}

int cmd_solve(const RunConfig& cfg) {
  auto spec = load_domain(cfg.domain_path);
  auto art = solve_domain(spec, cfg.h, cfg.tol);
  MeshLocator loc(art.mesh);
  classify_indices(art.crit, art.eig, art.mesh, loc);

  fs::create_directories(cfg.out_dir);
  write_solution_csv(art.mesh, art.eig, (fs::path(cfg.out_dir) / "solution.csv").string());
  write_mesh_csv(art.mesh, cfg.out_dir);
  write_text_file((fs::path(cfg.out_dir) / "summary.json").string(),
                  solve_summary_json(art.eig).dump(2) + "\n");

  RenderOverlays ov;
  ov.critical_points = art.crit.points;
  ov.vertex_extrema = art.crit.vertex_extrema;
  double thresh = 2.0 * cfg.h * art.eig.lambda1 * art.eig.u.maxCoeff();
  NodalGraphOptions ngo;
  ngo.degenerate_threshold = thresh;
  for (double delta : {0.0, 1.5707963267948966}) {
    auto xu = directional_field(art.grad, art.mesh,
                                DerivativeFieldSpec::constant(delta));
    auto ng = nodal_graph(xu, art.mesh, ngo);
    if (!ng.degenerate)
      for (auto& a : ng.arcs) ov.arcs.push_back(a);
  }
  write_text_file((fs::path(cfg.out_dir) / "solution.svg").string(),
                  render_solution_svg(art.mesh, art.eig.u, ov));

  std::cout << "lambda1 = " << art.eig.lambda1 << " (residual " << art.eig.residual
            << ", " << art.eig.iterations << " iterations)\n"
            << "critical points: " << art.crit.points.size()
            << ", vertex extrema: " << art.crit.vertex_extrema.size() << "\n"
            << "outputs in " << cfg.out_dir << "\n";
  return 0;
}

int finish_reports(const std::vector<VerificationReport>& reports,
                   const RunConfig& cfg, const std::string& stem) {
  fs::create_directories(cfg.out_dir);
  nlohmann::ordered_json j = nlohmann::json::array();
  std::string text;
  bool all_pass = true;
  int inconclusive = 0, total_claims = 0;
  for (const auto& r : reports) {
    j.push_back(report_to_json(r));
    text += r.to_text() + "\n";
    all_pass = all_pass && r.passed();
    inconclusive += r.inconclusive_count();
    total_claims += static_cast<int>(r.claims.size());
  }
  write_text_file((fs::path(cfg.out_dir) / (stem + ".json")).string(), j.dump(2) + "\n");
  write_text_file((fs::path(cfg.out_dir) / (stem + ".txt")).string(), text);
  std::cout << text;
  std::cout << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << " (" << inconclusive
            << "/" << total_claims << " inconclusive)\n";
  return all_pass ? 0 : 1;
}

int cmd_verify_triangle(const RunConfig& cfg) {
  std::vector<std::function<VerificationReport()>> cases;
  const auto& j = cfg.inline_config;
  if (j.contains("triangles")) {
    for (const auto& jt : j["triangles"]) {
      Point p0{jt.at("p0").at(0).get<double>(), jt.at("p0").at(1).get<double>()};
      Point p1{jt.at("p1").at(0).get<double>(), jt.at("p1").at(1).get<double>()};
      Point p2{jt.at("p2").at(0).get<double>(), jt.at("p2").at(1).get<double>()};
      std::vector<int> de = jt.at("dirichlet_edges").get<std::vector<int>>();
      double h = jt.contains("h") ? jt.at("h").get<double>() : cfg.h;
      cases.push_back([=] { return verify_triangle(triangle_spec(p0, p1, p2, de), h); });
    }
  }
  if (cases.empty()) {
    std::cerr << "error: no cases (config needs a \"triangles\" array)\n";
    return 2;
  }
  return finish_reports(run_cases(cases), cfg, "triangle_report");
}

int cmd_verify_graph(const RunConfig& cfg) {
  std::vector<std::function<VerificationReport()>> cases;
  const auto& j = cfg.inline_config;
  if (j.contains("profiles")) {
    for (const auto& jp : j["profiles"]) {
      GraphFunction f;
      f.x = jp.at("x").get<std::vector<double>>();
      f.y = jp.at("y").get<std::vector<double>>();
      double h = jp.contains("h") ? jp.at("h").get<double>() : cfg.h;
      cases.push_back([=] { return verify_graph_domain(f, h); });
    }
  }
  if (cases.empty()) {
    std::cerr << "error: no cases (config needs a \"profiles\" array)\n";
    return 2;
  }
  return finish_reports(run_cases(cases), cfg, "graph_report");
}

int cmd_approx(const RunConfig& cfg) {
  GraphFunction f;
  if (cfg.inline_config.contains("f")) {
    f.x = cfg.inline_config["f"]["x"].get<std::vector<double>>();
    f.y = cfg.inline_config["f"]["y"].get<std::vector<double>>();
  } else if (!cfg.domain_path.empty()) {
    std::ifstream df(cfg.domain_path);
    if (!df) throw IoError("cannot open " + cfg.domain_path);
    nlohmann::json jd;
    df >> jd;
    auto gf = graph_function_from_json(jd);
    if (!gf) throw IoError("approx-experiment needs a graph profile (\"f\")");
    f = *gf;
  } else {
    std::cerr << "error: no profile given (config \"f\" or --domain)\n";
    return 2;
  }
  auto rep = domain_approximation_experiment(f, cfg.depths, cfg.h);
  return finish_reports({rep}, cfg, "approx_report");
}

int cmd_scan(const RunConfig& cfg) {
  ScanFamily fam;
  if (cfg.family == "convex-quad")
    fam = ScanFamily::ConvexQuad;
  else if (cfg.family == "triangle")
    fam = ScanFamily::Triangle;
  else if (cfg.family == "thin-nonconvex")
    fam = ScanFamily::ThinNonconvex;
  else {
    std::cerr << "error: unknown family " << cfg.family << "\n";
    return 2;
  }
  auto scan = scan_conjecture(fam, cfg.budget, cfg.seed, cfg.h);
  fs::create_directories(cfg.out_dir);
  write_text_file((fs::path(cfg.out_dir) / "scan.json").string(),
                  scan_summary_json(scan).dump(2) + "\n");
  std::cout << "scan " << cfg.family << ": " << scan.samples.size() << " samples, "
            << scan.failures << " failures, " << scan.total_interior_extrema
            << " interior extrema, " << scan.candidates.size()
            << " candidates for refinement study\n";
  return 0;
}

int cmd_render(const std::string& solution_path, const std::string& mesh_dir,
               const std::string& out_path, const std::string& overlay) {
  auto sol = read_solution_csv(solution_path);
  Mesh mesh = read_mesh_csv(mesh_dir);
  if (mesh.nodes.size() != sol.nodes.size())
    throw IoError("solution and mesh node counts differ");
  RenderOverlays ov;
  if (overlay == "dx" || overlay == "dy") {
    auto g = recover_gradient(sol.u, mesh);
    auto xu = directional_field(
        g, mesh, DerivativeFieldSpec::constant(overlay == "dx" ? 0.0 : 1.5707963267948966));
    auto ng = nodal_graph(xu, mesh);
    ov.arcs = ng.arcs;
  } else if (!overlay.empty()) {
    throw IoError("unknown overlay: " + overlay + " (want dx or dy)");
  }
  write_text_file(out_path, render_solution_svg(mesh.nodes, mesh.triangles,
                                                mesh.boundary_edges, sol.u, ov));
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first mixed Dirichlet-Neumann eigenfunctions: solver and "
               "hot-spots verification suites"};
  app.set_help_flag("--help", "print help");  // frees --h for the mesh size
  app.require_subcommand(1);

  std::string config_path, domain_path, out_dir, family, solution_path, mesh_dir,
      out_path, overlay;
  double h = 0, tol = 0;
  int nmax = 0, budget = 0, depths = 0;
  unsigned seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--config", config_path, "JSON config; flags override");
    sub->add_option("--h", h, "target mesh size");
    sub->add_option("--tol", tol, "eigensolver relative residual tolerance");
    sub->add_option("--nmax", nmax, "vertex expansion order");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "scan seed");
    sub->add_option("--budget", budget, "scan sample budget");
  };

  auto* solve = app.add_subcommand("solve", "solve one domain and export artifacts");
  solve->add_option("--domain", domain_path, "domain spec JSON");
  add_common(solve);

  auto* vtri = app.add_subcommand("verify-triangle", "triangle theorem suite");
  add_common(vtri);

  auto* vgraph = app.add_subcommand("verify-graph", "graph-domain suite");
  add_common(vgraph);

  auto* approx = app.add_subcommand("approx-experiment",
                                    "nested domain approximation experiment");
  approx->add_option("--domain", domain_path, "graph profile JSON");
  approx->add_option("--depths", depths, "number of nesting levels");
  add_common(approx);

  auto* scan = app.add_subcommand("scan", "no-hot-spots conjecture scan");
  scan->add_option("--family", family, "convex-quad | triangle | thin-nonconvex");
  add_common(scan);

  auto* render = app.add_subcommand("render", "re-render a solved case to SVG");
  render->set_help_flag("--help", "print help");
  render->add_option("--solution", solution_path, "solution.csv from solve")->required();
  render->add_option("--mesh", mesh_dir, "directory with mesh CSVs")->required();
  render->add_option("--svg", out_path, "output SVG path")->required();
  render->add_option("--overlay", overlay, "nodal overlay: dx or dy");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (!domain_path.empty()) cfg.domain_path = domain_path;
    if (h > 0) cfg.h = h;
    if (tol > 0) cfg.tol = tol;
    if (nmax > 0) cfg.n_max = nmax;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed > 0) cfg.seed = seed;
    if (budget > 0) cfg.budget = budget;
    if (depths > 0) cfg.depths = depths;
    if (!family.empty()) cfg.family = family;
    cfg.validate();

    if (solve->parsed()) return cmd_solve(cfg);
    if (vtri->parsed()) return cmd_verify_triangle(cfg);
    if (vgraph->parsed()) return cmd_verify_graph(cfg);
    if (approx->parsed()) return cmd_approx(cfg);
    if (scan->parsed()) return cmd_scan(cfg);
    if (render->parsed())
      return cmd_render(solution_path, mesh_dir, out_path, overlay);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
