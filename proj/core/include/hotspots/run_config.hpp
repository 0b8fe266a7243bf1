#pragma once

// Run configuration shared by the CLI subcommands: a single JSON document
// whose fields individual command-line flags override.

#include <json.hpp>
#include <string>

namespace hotspots {

struct RunConfig {
  std::string subcommand;
  std::string domain_path;
  double h = 1.0 / 32;
  double tol = 1e-10;
  int n_max = 6;
  std::string out_dir = "out";
  int budget = 50;
  unsigned seed = 1;
  int depths = 4;
  std::string family = "convex-quad";
  nlohmann::json inline_config;  // full parsed config document, if any

  void validate() const {
    if (!(h > 0)) throw std::invalid_argument("h must be positive");
    if (!(tol > 0 && tol <= 1e-2))
      throw std::invalid_argument("tol must lie in (0, 1e-2]");
    if (n_max < 1) throw std::invalid_argument("nmax must be >= 1");
  }

  static RunConfig from_json(const nlohmann::json& j) {
    RunConfig c;
    c.inline_config = j;
    if (j.contains("subcommand")) c.subcommand = j["subcommand"].get<std::string>();
    if (j.contains("domain")) c.domain_path = j["domain"].get<std::string>();
    if (j.contains("h")) c.h = j["h"].get<double>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("nmax")) c.n_max = j["nmax"].get<int>();
    if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
    if (j.contains("budget")) c.budget = j["budget"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned>();
    if (j.contains("depths")) c.depths = j["depths"].get<int>();
    if (j.contains("family")) c.family = j["family"].get<std::string>();
    return c;
  }
};

}  // namespace hotspots
