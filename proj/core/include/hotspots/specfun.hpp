#pragma once

// Fractional-order Bessel radial functions, vertex-expansion fitting, and
// the degree-one vertex window predicates for constant/rotational derivative
// fields at polygon corners.

#include <Eigen/Dense>

#include "hotspots/eigensolve.hpp"
#include "hotspots/mesh.hpp"

namespace hotspots {

/// Ascending series J_mu(x) = sum_k (-1)^k (x/2)^(mu+2k) / (k! Gamma(mu+k+1)),
/// truncated when a term drops below 1e-17 of the partial sum. The alternating
/// sum is accumulated in double-double arithmetic so cancellation at large x
/// does not eat the accuracy budget. Supported for mu >= 0, 0 <= x <= 30.
double bessel_j(double mu, double x);

/// k-th positive zero of J_mu on (0, 30], by scan + bisection on the series.
double bessel_first_zero(double mu, int k = 1);

/// J_mu(sqrt(lambda) r) viewed as r^mu * g_mu(r^2).
struct BesselRadial {
  double mu = 0.0;
  double lambda = 0.0;

  double operator()(double r) const { return bessel_j(mu, std::sqrt(lambda) * r); }
  /// g_mu(0) = (sqrt(lambda)/2)^mu / Gamma(mu+1), nonzero by construction.
  double g_at_zero() const;
};

struct DerivativeFieldSpec {
  enum class Kind { Constant, Rotational };
  Kind kind = Kind::Constant;
  double angle_delta = 0.0;  // Constant: unit field (cos d, sin d)
  Point center;              // Rotational: (x-c)^perp field

  static DerivativeFieldSpec constant(double delta) {
    return {Kind::Constant, delta, {}};
  }
  static DerivativeFieldSpec rotational(Point c) {
    return {Kind::Rotational, 0.0, c};
  }
  Point direction_at(Point p) const {
    if (kind == Kind::Constant) return {std::cos(angle_delta), std::sin(angle_delta)};
    return {-(p.y - center.y), p.x - center.x};
  }
};

struct VertexExpansionFit {
  int vertex_id = -1;
  VertexType vtype = VertexType::NeumannVertex;
  double beta = 0.0;
  double nu = 0.0;
  // Coefficients a_n (Neumann), b_n (Dirichlet, starting at n=1), or c_n
  // (mixed), in u units, index = n.
  std::vector<double> coefficients;
  double r_min = 0.0, r_max = 0.0;
  double residual = 0.0;  // relative to the sampled-u norm on the annulus

  double leading() const {
    return vtype == VertexType::DirichletVertex
               ? (coefficients.size() > 1 ? coefficients[1] : 0.0)
               : (coefficients.empty() ? 0.0 : coefficients[0]);
  }
};

struct FitOptions {
  int n_max = 6;
  // Annulus (r_min, r_max); zero means the defaults: r_min = 2 h_local,
  // r_max = min(0.2 * shortest incident edge, sector reach).
  double r_min = 0.0;
  double r_max = 0.0;
  int radial_samples = 12;
  int angular_samples = 24;
};

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Least-squares fit of the eigenfunction against the sector basis for the
/// vertex type: J_{n nu} cos(n nu t) (Neumann), J_{n nu} sin(n nu t)
/// (Dirichlet), J_{(n+1/2) nu} sin((n+1/2) nu t) (mixed, Dirichlet edge at
/// t = 0). t is the ccw angle from the outgoing boundary edge at the vertex.
VertexExpansionFit fit_vertex_expansion(const EigenPair& eig, const Mesh& mesh,
                                        const VertexInfo& v,
                                        const FitOptions& opts = {});

/// Same fit against an arbitrary sampler (used by round-trip tests).
VertexExpansionFit fit_vertex_expansion_sampled(
    const std::function<std::optional<double>(Point)>& sample, double lambda,
    const VertexInfo& v, double r_min, double r_max, const FitOptions& opts);

enum class DegreePrediction { IsDegreeOneVertex, NotAVertex, Inconclusive };

struct DegreePredicateOptions {
  // Window-membership calls within this angular band of an interval endpoint
  // are Inconclusive: the conclusions switch exactly there.
  double boundary_band = 0.05;
};

/// Whether the zero set of Xu has an arc ending at vertex v, from the sector
/// window of the field angle. a1_zero: the fitted first-harmonic coefficient
/// vanished (within noise) for a Neumann vertex. Throws std::invalid_argument
/// for unsupported combinations (rotational field at a non-mixed vertex, or a
/// rotational center off the Dirichlet edge line).
DegreePrediction degree_one_predicate(const VertexInfo& v,
                                      const DerivativeFieldSpec& field,
                                      bool a1_zero,
                                      const DegreePredicateOptions& opts = {});

}  // namespace hotspots
