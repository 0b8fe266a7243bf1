#pragma once

// End-to-end verification drivers: triangle routing, graph-domain bounds,
// nested domain approximation, and the no-hot-spots scan.

#include <functional>

#include "hotspots/critical_points.hpp"
#include "hotspots/edge_integrals.hpp"
#include "hotspots/report.hpp"

namespace hotspots {

struct SolveArtifacts {
  Mesh mesh;
  EigenPair eig;
  RecoveredGradient grad;
  CriticalPointReport crit;
};

struct VerifyOptions {
  double tol = 1e-10;
  double iso_tolerance = 0.02;    // relative edge-length window around isosceles
  double angle_tolerance = 1e-9;  // right-angle classification width
};

/// Solve + critical point detection in one step (shared by the drivers).
SolveArtifacts solve_domain(const PlanarDomainSpec& spec, double h,
                            double tol = 1e-10);

/// Routes by the case structure: one/two Dirichlet edges, Neumann-vertex
/// angle class, isosceles window. Each route pins the monotone direction L
/// named by the corresponding statement.
VerificationReport verify_triangle(const TriangleSpec& tri, double h,
                                   const VerifyOptions& opts = {});

VerificationReport verify_graph_domain(const GraphFunction& f, double h,
                                       const VerifyOptions& opts = {});

/// Nested piecewise-linear exhaustion: lambda_1 must be nonincreasing with
/// gaps shrinking at least 2x per level. Levels are built by breakpoint
/// subsampling; a non-nested sequence is rejected.
VerificationReport domain_approximation_experiment(const GraphFunction& f,
                                                   int depths, double h,
                                                   const VerifyOptions& opts = {});

enum class ScanFamily { ConvexQuad, Triangle, ThinNonconvex };

struct ScanSample {
  int sample_index = -1;
  std::string shape;
  double lambda1 = 0.0;
  int interior_extrema = 0;
  int interior_critical = 0;
  bool failed = false;
  std::string error;
};

struct ScanSummary {
  ScanFamily family;
  int budget = 0;
  unsigned seed = 0;
  std::vector<ScanSample> samples;
  int total_interior_extrema = 0;
  int failures = 0;
  // Candidate counterexamples, reported for manual refinement study only.
  std::vector<ScanSample> candidates;
};

ScanSummary scan_conjecture(ScanFamily family, int budget, unsigned seed,
                            double h = 1.0 / 32);

struct PredicateAgreement {
  int pairs = 0;
  int matches = 0;
  int inconclusive = 0;
  int contradictions = 0;
};

/// Compares the sector window predicate against traced nodal-graph incidence
/// for every (vertex, field) pair. A pair counts inconclusive when either
/// side cannot commit: predicate at a window boundary, field below noise
/// near the vertex, or an arc endpoint in the snap-ambiguous band.
PredicateAgreement degree_predicate_agreement(
    const SolveArtifacts& art, const std::vector<DerivativeFieldSpec>& fields);

/// Order-stable parallel map over independent cases; concurrency is capped
/// by HOTSPOTS_THREADS (default 1).
std::vector<VerificationReport> run_cases(
    const std::vector<std::function<VerificationReport()>>& cases);

int hotspots_thread_cap();

}  // namespace hotspots
