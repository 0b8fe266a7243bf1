#include "hotspots/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hotspots {

namespace {
std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

PlanarDomainSpec domain_from_json(const nlohmann::json& j) {
  if (j.contains("f")) {
    GraphFunction f;
    f.x = j.at("f").at("x").get<std::vector<double>>();
    f.y = j.at("f").at("y").get<std::vector<double>>();
    return graph_domain_from_function(f);
  }
  if (!j.contains("arcs")) throw IoError("domain JSON needs \"arcs\" or \"f\"");
  DomainKind kind = DomainKind::Polygon;
  if (j.contains("kind")) {
    std::string k = j.at("kind").get<std::string>();
    if (k == "GraphDomain")
      kind = DomainKind::GraphDomain;
    else if (k != "Polygon")
      throw IoError("unknown domain kind: " + k);
  }
  std::vector<BoundaryArc> arcs;
  for (const auto& ja : j.at("arcs")) {
    BoundaryArc arc;
    for (const auto& jp : ja.at("points"))
      arc.polyline.push_back({jp.at(0).get<double>(), jp.at(1).get<double>()});
    std::string cond = ja.at("condition").get<std::string>();
    if (cond == "D")
      arc.condition = Condition::Dirichlet;
    else if (cond == "N")
      arc.condition = Condition::Neumann;
    else
      throw IoError("condition must be \"D\" or \"N\"");
    if (ja.contains("arc_id")) arc.arc_id = ja.at("arc_id").get<std::string>();
    arcs.push_back(std::move(arc));
  }
  return make_domain(std::move(arcs), kind);
}

std::optional<GraphFunction> graph_function_from_json(const nlohmann::json& j) {
  if (!j.contains("f")) return std::nullopt;
  GraphFunction f;
  f.x = j.at("f").at("x").get<std::vector<double>>();
  f.y = j.at("f").at("y").get<std::vector<double>>();
  f.validate();
  return f;
}

nlohmann::json domain_to_json(const PlanarDomainSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = spec.kind == DomainKind::GraphDomain ? "GraphDomain" : "Polygon";
  j["arcs"] = nlohmann::json::array();
  for (const auto& arc : spec.arcs) {
    nlohmann::ordered_json ja;
    ja["points"] = nlohmann::json::array();
    for (const auto& p : arc.polyline) ja["points"].push_back({p.x, p.y});
    ja["condition"] = arc.condition == Condition::Dirichlet ? "D" : "N";
    ja["arc_id"] = arc.arc_id;
    j["arcs"].push_back(ja);
  }
  return j;
}

PlanarDomainSpec load_domain(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open domain file: " + path);
  nlohmann::json j;
  f >> j;
  return domain_from_json(j);
}

void write_solution_csv(const Mesh& mesh, const EigenPair& eig,
                        const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  f << "node_id,x,y,u\n";
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    f << i << ',' << fmt17(mesh.nodes[i].x) << ',' << fmt17(mesh.nodes[i].y) << ','
      << fmt17(eig.u[i]) << '\n';
}

SolutionData read_solution_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw IoError("empty solution file");
  {
    std::stringstream hs(line);
    std::vector<std::string> cols;
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
    const char* need[] = {"node_id", "x", "y", "u"};
    for (int k = 0; k < 4; ++k)
      if (k >= static_cast<int>(cols.size()) || cols[k] != need[k])
        throw IoError(std::string("solution CSV missing column: ") + need[k]);
  }
  SolutionData out;
  std::vector<double> uvals;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string item;
    std::vector<std::string> cells;
    while (std::getline(ss, item, ',')) cells.push_back(item);
    if (cells.size() < 4) throw IoError("solution CSV row with missing fields");
    out.nodes.push_back({std::stod(cells[1]), std::stod(cells[2])});
    uvals.push_back(std::stod(cells[3]));
  }
  out.u = Eigen::Map<Eigen::VectorXd>(uvals.data(), uvals.size());
  return out;
}

nlohmann::ordered_json solve_summary_json(const EigenPair& eig) {
  nlohmann::ordered_json j;
  j["lambda1"] = eig.lambda1;
  j["residual"] = eig.residual;
  j["iterations"] = eig.iterations;
  return j;
}

nlohmann::ordered_json report_to_json(const VerificationReport& rep) {
  nlohmann::ordered_json j;
  j["case_id"] = rep.case_id;
  j["spec_summary"] = rep.spec_summary;
  j["h"] = rep.h;
  j["lambda1"] = rep.lambda1;
  j["residual"] = rep.residual;
  j["claims"] = nlohmann::json::array();
  for (const auto& c : rep.claims) {
    nlohmann::ordered_json jc;
    jc["id"] = c.id;
    jc["statement"] = claim_statement(c.id);
    jc["predicted"] = c.predicted;
    jc["observed"] = c.observed;
    jc["outcome"] = to_string(c.outcome);
    j["claims"].push_back(jc);
  }
  j["passed"] = rep.passed();
  j["inconclusive"] = rep.inconclusive_count();
  j["artifacts"] = rep.artifacts;
  return j;
}

nlohmann::ordered_json scan_summary_json(const ScanSummary& scan) {
  nlohmann::ordered_json j;
  switch (scan.family) {
    case ScanFamily::ConvexQuad: j["family"] = "convex-quad"; break;
    case ScanFamily::Triangle: j["family"] = "triangle"; break;
    case ScanFamily::ThinNonconvex: j["family"] = "thin-nonconvex"; break;
  }
  j["budget"] = scan.budget;
  j["seed"] = scan.seed;
  j["failures"] = scan.failures;
  j["total_interior_extrema"] = scan.total_interior_extrema;
  j["samples"] = nlohmann::json::array();
  for (const auto& s : scan.samples) {
    nlohmann::ordered_json js;
    js["index"] = s.sample_index;
    js["shape"] = s.shape;
    js["lambda1"] = s.lambda1;
    js["interior_critical"] = s.interior_critical;
    js["interior_extrema"] = s.interior_extrema;
    js["failed"] = s.failed;
    if (s.failed) js["error"] = s.error;
    j["samples"].push_back(js);
  }
  j["candidates"] = nlohmann::json::array();
  for (const auto& s : scan.candidates) j["candidates"].push_back(s.sample_index);
  return j;
}

nlohmann::ordered_json fit_report_json(const VertexExpansionFit& fit) {
  nlohmann::ordered_json j;
  switch (fit.vtype) {
    case VertexType::NeumannVertex: j["vtype"] = "Neumann"; break;
    case VertexType::DirichletVertex: j["vtype"] = "Dirichlet"; break;
    case VertexType::MixedVertex: j["vtype"] = "Mixed"; break;
  }
  j["beta"] = fit.beta;
  j["nu"] = fit.nu;
  j["coefficients"] = fit.coefficients;
  j["r_min"] = fit.r_min;
  j["r_max"] = fit.r_max;
  j["residual"] = fit.residual;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (fs::path(path).has_parent_path())
    fs::create_directories(fs::path(path).parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace hotspots
