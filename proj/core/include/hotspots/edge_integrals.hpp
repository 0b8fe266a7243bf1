#pragma once

// Boundary integral checks: the closed-form tangential identity for Lu along
// Neumann edges, and per-component positivity of the flux integral of a
// derivative field over its nodal components.

#include <Eigen/Dense>

#include "hotspots/critical_points.hpp"
#include "hotspots/gradient.hpp"

namespace hotspots {

struct TaoIdentityResult {
  double lhs = 0.0;  // quadrature of Lu d_nu(Lu) along gamma
  double rhs = 0.0;  // -1/2 lambda <L,gamma'> <L,nu> (u(q)^2 - u(p)^2)
  double rel_gap = 0.0;
};

struct IdentityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// p and q must be critical points of u or Neumann vertices lying on the same
/// straight Neumann edge (arc arc_index); gamma runs from p to q along the
/// edge. The lhs uses trapezoid quadrature of the recovered fields.
TaoIdentityResult tao_identity_check(const EigenPair& eig, const Mesh& mesh,
                                     const RecoveredGradient& g, int arc_index,
                                     Point p, Point q,
                                     const DerivativeFieldSpec& l);

struct ComponentIntegral {
  int component_id = -1;
  int n_elements = 0;
  double integral = 0.0;       // quadrature of phi d_nu(phi) over dU cap dOmega
  bool admissible = false;     // phi vanishes on the Dirichlet part of dU
  bool touches_dirichlet = false;
  bool borderline = false;     // |phi| ~ 0 on the whole of dU cap dOmega
  bool graded_quadrature = false;  // refined near an endpoint of the
                                   // Dirichlet closure
  bool positive = false;
};

struct SignComponentOptions {
  // Graded subdivision reach around endpoints of the Dirichlet closure, in
  // h units, with ratio 1/2.
  double singular_radius_factor = 4.0;
  int graded_levels = 8;
  double borderline_fraction = 1e-6;  // of max |phi| over the mesh
};

/// Splits the mesh elements by the sign of the nodal field, then evaluates
/// the boundary integral of field * d_nu(field) for every component with
/// nonempty exterior. Admissibility is geometric: every Dirichlet edge the
/// component touches must be a line the field is tangent to.
std::vector<ComponentIntegral> sign_component_check(
    const Eigen::VectorXd& field, const Mesh& mesh, const DerivativeFieldSpec& x,
    const SignComponentOptions& opts = {});

}  // namespace hotspots
