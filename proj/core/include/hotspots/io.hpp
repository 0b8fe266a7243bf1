#pragma once

// File formats: domain spec JSON, solution CSV + summary JSON, verification
// report JSON. All output is byte-deterministic for fixed inputs.

#include <json.hpp>
#include <string>

#include "hotspots/eigensolve.hpp"
#include "hotspots/report.hpp"
#include "hotspots/verify.hpp"

namespace hotspots {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// {"kind": "Polygon"|"GraphDomain", "arcs": [...]} or {"f": {"x": [...],
// "y": [...]}} for graph domains.
PlanarDomainSpec domain_from_json(const nlohmann::json& j);
nlohmann::json domain_to_json(const PlanarDomainSpec& spec);
PlanarDomainSpec load_domain(const std::string& path);

/// Graph profile when the JSON carried one ("f" form); nullopt otherwise.
std::optional<GraphFunction> graph_function_from_json(const nlohmann::json& j);

void write_solution_csv(const Mesh& mesh, const EigenPair& eig,
                        const std::string& path);
struct SolutionData {
  std::vector<Point> nodes;
  Eigen::VectorXd u;
};
SolutionData read_solution_csv(const std::string& path);

nlohmann::ordered_json solve_summary_json(const EigenPair& eig);
nlohmann::ordered_json report_to_json(const VerificationReport& rep);
nlohmann::ordered_json scan_summary_json(const ScanSummary& scan);
nlohmann::ordered_json fit_report_json(const VertexExpansionFit& fit);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace hotspots
