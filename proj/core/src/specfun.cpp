#include "hotspots/specfun.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "hotspots/locate.hpp"

namespace hotspots {

namespace {

constexpr double kPi = std::numbers::pi;

// Double-double arithmetic (Dekker/Knuth). The alternating Bessel series at
// x near 30 cancels ~12 digits; plain double accumulation cannot reach the
// 1e-12 contract, so both the terms and the sum are carried in ~31 digits.
struct DD {
  double hi = 0, lo = 0;
};

DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DD two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  double hi = s.hi + s.lo;
  return {hi, s.lo - (hi - s.hi)};
}

DD dd_mul(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  double hi = p.hi + p.lo;
  return {hi, p.lo - (hi - p.hi)};
}

DD dd_div(DD a, DD b) {
  double q1 = a.hi / b.hi;
  DD r = dd_add(a, dd_mul({-q1, 0}, b));
  double q2 = r.hi / b.hi;
  r = dd_add(r, dd_mul({-q2, 0}, b));
  double q3 = r.hi / b.hi;
  DD q = two_sum(q1, q2);
  q.lo += q3;
  double hi = q.hi + q.lo;
  return {hi, q.lo - (hi - q.hi)};
}

}  // namespace

double bessel_j(double mu, double x) {
  if (mu < 0) throw std::domain_error("bessel_j: order must be nonnegative");
  if (x < 0 || x > 30) throw std::domain_error("bessel_j: x outside [0, 30]");
  if (x == 0) return mu == 0 ? 1.0 : 0.0;

  double half = 0.5 * x;
  // Leading factor (x/2)^mu / Gamma(mu+1) in double: a pure scale, so its
  // rounding does not interact with the cancellation.
  double lead = std::pow(half, mu) / std::tgamma(mu + 1.0);
  DD q = two_prod(half, half);
  DD term{1.0, 0.0};
  DD sum = term;
  for (int k = 1; k < 400; ++k) {
    DD denom = dd_mul({static_cast<double>(k), 0}, two_sum(static_cast<double>(k), mu));
    term = dd_div(dd_mul(term, q), denom);
    term.hi = -term.hi;
    term.lo = -term.lo;
    sum = dd_add(sum, term);
    if (std::abs(term.hi) < 1e-17 * std::abs(sum.hi) + 1e-300) break;
  }
  return lead * (sum.hi + sum.lo);
}

double bessel_first_zero(double mu, int k) {
  if (k < 1) throw std::domain_error("zero index must be positive");
  double lo = 1e-6;
  double prev = bessel_j(mu, lo);
  int found = 0;
  for (double x = 0.02; x <= 30.0; x += 0.02) {
    double cur = bessel_j(mu, x);
    if ((prev > 0) != (cur > 0)) {
      ++found;
      if (found == k) {
        double a = x - 0.02, b = x;
        for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
          double m = 0.5 * (a + b);
          double fm = bessel_j(mu, m);
          if ((fm > 0) == (prev > 0))
            a = m;
          else
            b = m;
        }
        return 0.5 * (a + b);
      }
    }
    prev = cur;
  }
  throw std::domain_error("requested Bessel zero beyond x=30");
}

double BesselRadial::g_at_zero() const {
  return std::pow(0.5 * std::sqrt(lambda), mu) / std::tgamma(mu + 1.0);
}

namespace {

struct SectorFrame {
  Point base;      // unit direction of the reference edge
  double sign;     // +1: sector sweeps ccw from base; -1: cw
  double base_angle;

  // ccw-in-sector angle of point p relative to the vertex.
  double theta(Point v, Point p) const {
    Point d = p - v;
    double t = sign * (std::atan2(d.y, d.x) - base_angle);
    while (t < -kPi) t += 2 * kPi;
    while (t > 2 * kPi) t -= 2 * kPi;
    return t;
  }
  double local_field_angle(double delta_global) const {
    double t = sign * (delta_global - base_angle);
    t = std::fmod(t, 2 * kPi);
    if (t < 0) t += 2 * kPi;
    return t;
  }
};

// For mixed vertices the reference edge must be the Dirichlet one; otherwise
// the outgoing edge is used. The interior sector runs ccw from next_dir to
// prev_dir, so referencing prev_dir mirrors the frame.
SectorFrame sector_frame(const VertexInfo& v) {
  bool use_prev = v.vtype == VertexType::MixedVertex &&
                  v.prev_condition == Condition::Dirichlet &&
                  v.next_condition != Condition::Dirichlet;
  SectorFrame f;
  f.base = use_prev ? v.prev_dir : v.next_dir;
  f.sign = use_prev ? -1.0 : 1.0;
  f.base_angle = std::atan2(f.base.y, f.base.x);
  return f;
}

struct Basis {
  std::vector<double> orders;  // Bessel order per column
  std::vector<double> freqs;   // angular frequency per column
  bool use_sin = false;
  int first_n = 0;
};

Basis sector_basis(const VertexInfo& v, int n_max) {
  Basis b;
  if (v.vtype == VertexType::NeumannVertex) {
    b.use_sin = false;
    b.first_n = 0;
    for (int n = 0; n <= n_max; ++n) {
      b.orders.push_back(n * v.nu);
      b.freqs.push_back(n * v.nu);
    }
  } else if (v.vtype == VertexType::DirichletVertex) {
    b.use_sin = true;
    b.first_n = 1;
    for (int n = 1; n <= n_max; ++n) {
      b.orders.push_back(n * v.nu);
      b.freqs.push_back(n * v.nu);
    }
  } else {
    b.use_sin = true;
    b.first_n = 0;
    for (int n = 0; n <= n_max; ++n) {
      b.orders.push_back((n + 0.5) * v.nu);
      b.freqs.push_back((n + 0.5) * v.nu);
    }
  }
  return b;
}

}  // namespace

VertexExpansionFit fit_vertex_expansion_sampled(
    const std::function<std::optional<double>(Point)>& sample, double lambda,
    const VertexInfo& v, double r_min, double r_max, const FitOptions& opts) {
  if (!(r_min > 0 && r_max > r_min)) throw FitError("empty annulus");
  SectorFrame frame = sector_frame(v);
  Basis basis = sector_basis(v, opts.n_max);
  double sqrt_lambda = std::sqrt(lambda);

  std::vector<Point> pts;
  std::vector<double> vals;
  for (int i = 0; i < opts.radial_samples; ++i) {
    double r = r_min + (i + 0.5) / opts.radial_samples * (r_max - r_min);
    for (int j = 0; j < opts.angular_samples; ++j) {
      double t = v.angle_beta * (j + 0.5) / opts.angular_samples;
      double ang = frame.base_angle + frame.sign * t;
      Point p = v.position + Point{r * std::cos(ang), r * std::sin(ang)};
      auto val = sample(p);
      if (!val) continue;
      pts.push_back(p);
      vals.push_back(*val);
    }
  }
  if (static_cast<int>(pts.size()) < 10 * opts.n_max)
    throw FitError("not enough annulus samples inside the sector");

  const int cols = static_cast<int>(basis.orders.size());
  Eigen::MatrixXd A(pts.size(), cols);
  Eigen::VectorXd b(pts.size());
  for (size_t s = 0; s < pts.size(); ++s) {
    double r = dist(pts[s], v.position);
    double t = frame.theta(v.position, pts[s]);
    for (int c = 0; c < cols; ++c) {
      double radial = bessel_j(basis.orders[c], sqrt_lambda * r);
      double angular = basis.use_sin ? std::sin(basis.freqs[c] * t)
                                     : std::cos(basis.freqs[c] * t);
      A(s, c) = radial * angular;
    }
    b[s] = vals[s];
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.rank() == 0) throw FitError("rank-deficient basis on the annulus");
  svd.setThreshold(1e-13);
  Eigen::VectorXd c_full = svd.solve(b);
  double misfit = (A * c_full - b).norm();

  // Discrepancy-principle truncation: directions whose singular value sits
  // below the misfit floor carry no information at this noise level and are
  // zeroed rather than reported as noise quotients.
  double floor = 3.0 * misfit + 1e-13 * svd.singularValues()[0];
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
  {
    Eigen::VectorXd utb = svd.matrixU().transpose() * b;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
      double s = svd.singularValues()[i];
      if (s > floor) c += (utb[i] / s) * svd.matrixV().col(i);
    }
  }

  VertexExpansionFit fit;
  fit.vertex_id = v.id;
  fit.vtype = v.vtype;
  fit.beta = v.angle_beta;
  fit.nu = v.nu;
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.coefficients.assign(opts.n_max + 1, 0.0);
  for (int cidx = 0; cidx < cols; ++cidx)
    fit.coefficients[basis.first_n + cidx] = c[cidx];
  double bnorm = b.norm();
  fit.residual = bnorm > 0 ? (A * c - b).norm() / bnorm : 0.0;
  return fit;
}

VertexExpansionFit fit_vertex_expansion(const EigenPair& eig, const Mesh& mesh,
                                        const VertexInfo& v, const FitOptions& opts) {
  double r_min = opts.r_min, r_max = opts.r_max;
  if (r_max <= 0) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& w : mesh.vertices)
      if (w.id != v.id) nearest = std::min(nearest, dist(w.position, v.position));
    r_max = 0.2 * nearest;
  }
  if (r_min <= 0) {
    int node = mesh.vertex_node[v.id];
    double h_local = std::numeric_limits<double>::infinity();
    for (const auto& e : mesh.boundary_edges)
      if (e.a == node || e.b == node)
        h_local = std::min(h_local, dist(mesh.nodes[e.a], mesh.nodes[e.b]));
    r_min = 2.0 * h_local;
  }
  if (r_min >= r_max)
    throw FitError("annulus collapsed: r_min >= r_max; refine the mesh");
  MeshLocator loc(mesh);
  auto sample = [&](Point p) { return loc.eval(eig.u, p); };
  return fit_vertex_expansion_sampled(sample, eig.lambda1, v, r_min, r_max, opts);
}

namespace {

bool in_closed(double x, double lo, double hi) { return x >= lo && x <= hi; }

double dist_to_endpoints(double x, double lo, double hi) {
  return std::min(std::abs(x - lo), std::abs(x - hi));
}

// Membership of delta (mod 2pi) in [lo,hi] with a fuzzy band at the ends.
// Returns 1 inside, 0 outside, -1 within band of an endpoint.
int window_test(double delta, double lo, double hi, double band) {
  if (lo > hi) return 0;  // empty window
  for (double shift : {-2 * kPi, 0.0, 2 * kPi}) {
    double d = delta + shift;
    if (dist_to_endpoints(d, lo, hi) <= band) return -1;
    if (in_closed(d, lo, hi)) return 1;
  }
  return 0;
}

DegreePrediction combine(int w1, int w2) {
  if (w1 < 0 || w2 < 0) return DegreePrediction::Inconclusive;
  return (w1 > 0 || w2 > 0) ? DegreePrediction::IsDegreeOneVertex
                            : DegreePrediction::NotAVertex;
}

}  // namespace

DegreePrediction degree_one_predicate(const VertexInfo& v,
                                      const DerivativeFieldSpec& field,
                                      bool a1_zero,
                                      const DegreePredicateOptions& opts) {
  const double band = opts.boundary_band;
  const double beta = v.angle_beta;

  if (field.kind == DerivativeFieldSpec::Kind::Rotational) {
    if (v.vtype != VertexType::MixedVertex)
      throw std::invalid_argument("rotational predicate needs a mixed vertex");
    SectorFrame frame = sector_frame(v);
    Point rel = field.center - v.position;
    double off_line = std::abs(cross(frame.base, rel));
    double along = norm(rel);
    if (along < 1e-12)
      throw std::invalid_argument("rotational center coincides with the vertex");
    if (off_line > 1e-9 * along)
      throw std::invalid_argument("rotational center is off the Dirichlet edge line");
    if (beta >= kPi - band) return DegreePrediction::Inconclusive;
    return DegreePrediction::NotAVertex;
  }

  SectorFrame frame = sector_frame(v);
  double d = frame.local_field_angle(field.angle_delta);
  // The window membership is invariant under delta -> delta + pi (the zero
  // set of Xu does not see the field's sign); the published windows already
  // list both branches.

  switch (v.vtype) {
    case VertexType::NeumannVertex: {
      if (beta >= kPi - band) return DegreePrediction::Inconclusive;
      bool first_clause = beta < kPi / 2 - band || a1_zero;
      bool second_clause = beta > kPi / 2 + band && beta < kPi - band && !a1_zero;
      if (first_clause)
        return combine(window_test(d, kPi / 2, kPi / 2 + beta, band),
                       window_test(d, 3 * kPi / 2, 3 * kPi / 2 + beta, band));
      if (second_clause)
        return combine(window_test(d, beta - kPi / 2, kPi / 2, band),
                       window_test(d, beta + kPi / 2, 3 * kPi / 2, band));
      return DegreePrediction::Inconclusive;  // beta at the pi/2 boundary
    }
    case VertexType::DirichletVertex: {
      if (std::abs(beta - kPi) <= band) return DegreePrediction::Inconclusive;
      if (beta < kPi)
        return combine(window_test(d, beta, kPi, band),
                       window_test(d, kPi + beta, 2 * kPi, band));
      return combine(window_test(d, 0.0, beta - kPi, band),
                     window_test(d, kPi, beta, band));
    }
    case VertexType::MixedVertex: {
      if (beta >= kPi - band) return DegreePrediction::Inconclusive;
      return combine(window_test(d, beta + kPi / 2, kPi, band),
                     window_test(d, beta + 3 * kPi / 2, 2 * kPi, band));
    }
  }
  return DegreePrediction::Inconclusive;
}

}  // namespace hotspots
