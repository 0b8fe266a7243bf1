#pragma once

// Critical point detection (interior + Neumann boundary), level-set index
// classification, monotonicity checks, and the graph-domain critical-point
// count bounds.

#include <Eigen/Dense>
#include <optional>

#include "hotspots/gradient.hpp"
#include "hotspots/locate.hpp"

namespace hotspots {

enum class CritKind { Interior, OnNeumannBoundary };
enum class IndexValue { MinusOne, Zero, PlusOne, Unknown };

inline int index_to_int(IndexValue v) {
  switch (v) {
    case IndexValue::MinusOne: return -1;
    case IndexValue::Zero: return 0;
    case IndexValue::PlusOne: return 1;
    default: return 2;
  }
}

struct CriticalPoint {
  Point location;
  CritKind kind = CritKind::Interior;
  double u_value = 0.0;
  IndexValue index = IndexValue::Unknown;
  bool is_local_extremum_of_edge_restriction = false;  // boundary points
  bool is_max_of_edge_restriction = false;
  int arc_index = -1;  // boundary points: which arc
};

struct VertexExtremum {
  int vertex_id = -1;
  Point position;
  double u_value = 0.0;
  bool is_global_max = false;
};

struct CriticalPointReport {
  std::vector<CriticalPoint> points;
  std::vector<VertexExtremum> vertex_extrema;  // corners that are local maxima
  // Arc indices where the whole-edge tangential derivative sits below the
  // degeneracy threshold (the rectangle exclusion: an interval of critical
  // points instead of isolated ones).
  std::vector<int> interval_critical_arcs;
  bool overflow = false;  // more than max_candidates raw candidates
  double grad_max = 0.0;
};

struct CriticalPointOptions {
  double tau = 1e-3;              // |grad u| acceptance gate, relative to max
  int subdivision_rounds = 2;     // localization rounds inside candidate cells
  double merge_factor = 2.0;      // cluster radius in local-h units
  double vertex_exclusion = 1.0;  // dead zone near chain ends, in h units
  double flank_fraction = 1e-3;   // minimum |tangential| around a sign change
  // Whole-edge degeneracy threshold: c * h * lambda1 * max|u|.
  double degenerate_scale = 2.0;
  int max_candidates = 64;
};

CriticalPointReport find_critical_points(const EigenPair& eig, const Mesh& mesh,
                                         const RecoveredGradient& g,
                                         const CriticalPointOptions& opts = {});

struct IndexOptions {
  double radius_factor = 4.0;  // circle radius in local-h units
  int samples = 360;
};

/// Level-set branch count on a small circle around p: n crossings of
/// {u = u(p)} give index 1 - n/2. Boundary points are reflected across their
/// Neumann edge; Unknown when the count is unstable under radius doubling.
IndexValue index_of(const CriticalPoint& p, const Eigen::VectorXd& u_nodal,
                    const Mesh& mesh, const MeshLocator& loc,
                    const IndexOptions& opts = {});

/// Fills the index field of every report entry.
void classify_indices(CriticalPointReport& report, const EigenPair& eig,
                      const Mesh& mesh, const MeshLocator& loc);

struct MonotoneResult {
  double min_value = 0.0;
  bool holds = false;
};

/// min over element barycenters of Lu; holds iff min > -1e-6 * max|grad u|.
MonotoneResult check_monotone(const RecoveredGradient& g, const Mesh& mesh,
                              const DerivativeFieldSpec& l);

struct CountBoundResult {
  int k = 0;              // critical points on N
  int extrema_count = 0;  // local extrema of the edge restriction among them
  int bound_n = 0;
  bool satisfied = false;
};

CountBoundResult count_critical_on_N(const CriticalPointReport& report,
                                     const GraphFunction& f);

}  // namespace hotspots
