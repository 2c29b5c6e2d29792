#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "affgrass/grassmann.hpp"

namespace affgrass::affine {

using exact::DyadicInterval;
using exact::RatMatrix;
using exact::Rational;
using exact::RatVector;
using grass::GrassPoint;
using grass::MetricSample;

/// n-k vectors spanning the orthogonal complement of a subspace, each of norm
/// in [1/2, 2], independent, with smallest singular value >= 1/2.
struct ComplementBasis {
  std::vector<RatVector> vectors;
  RatMatrix matrix() const { return RatMatrix::from_columns(vectors); }
  friend bool operator==(const ComplementBasis&, const ComplementBasis&) = default;
};

/// P = V + t with t = sum coords_i basis_i in the orthogonal complement of V.
struct AffinePlane {
  GrassPoint direction;
  RatVector coords;
  ComplementBasis basis;
  RatVector translation;  ///< cached sum coords_i basis_i

  std::size_t n() const { return direction.n; }
  std::size_t k() const { return direction.k; }
  friend bool operator==(const AffinePlane& a, const AffinePlane& b) {
    return a.direction == b.direction && a.translation == b.translation;
  }
};

struct LineParams {
  RatVector slopes;      ///< a_1..a_{n-1}
  RatVector intercepts;  ///< b_1..b_{n-1}
  friend bool operator==(const LineParams&, const LineParams&) = default;
};

struct HyperplaneParams {
  RatVector a;  ///< x_n = a . (x_1..x_{n-1}) + b
  Rational b;
  friend bool operator==(const HyperplaneParams&, const HyperplaneParams&) = default;
};

/// Deterministic: the first lexicographic (n-k)-subset S of the standard basis
/// whose vectors e_i - V e_i pass all three conditions; if none does, exact
/// Gram-Schmidt of the first independent subset with each vector rescaled by a
/// power of two into the norm window [1/2, 1).
ComplementBasis complement_basis(const GrassPoint& v);

/// Checks the three conditions exactly (norm window, rank, sigma_min >= 1/2
/// decided by a Sturm count below 1/4) and that each vector lies in V-perp.
bool is_valid_complement_basis(const GrassPoint& v, const ComplementBasis& b);

/// I - proj(V).
GrassPoint complement_projection(const GrassPoint& v);
/// Verification path: span of e_i - V e_i over the (n-k)-subset with the
/// largest certified sigma_min.
GrassPoint complement_projection_from_span(const GrassPoint& v);

/// t = point - V point expressed in complement_basis(v).
AffinePlane make_affine(const GrassPoint& v, const RatVector& point);

MetricSample rho_affine(const AffinePlane& p1, const AffinePlane& p2, int precision);
/// Exact comparison of rho(V1, V2) + |t1 - t2| with c.
std::strong_ordering compare_rho_affine(const AffinePlane& p1, const AffinePlane& p2, const Rational& c);

/// Plane through k + 1 affinely independent points. Throws DegeneratePointSet.
AffinePlane plane_from_points(const std::vector<RatVector>& points);

struct BoxFit {
  AffinePlane plane;
  DyadicInterval error_bound;  ///< certified upper bound on rho(P, P-hat), as a point interval
  int r = 0;
};

/// Box of side 2^-r containing x: coordinates [floor(x 2^r) 2^-r, + 2^-r].
std::vector<DyadicInterval> round_to_box(const RatVector& x, int r);

/// Plane through the box centers with the bound
/// (C n / s + 2 + 2 |c0| C^2 n / s) eps, eps = 2 h 2^-r, h = max(1, sqrt(n)/2),
/// where s is sigma_min of the center differences and C the configured
/// metric-equivalence constant. Requires s > k eps so that the true
/// differences are independent too; throws DegeneratePointSet otherwise.
BoxFit plane_from_boxes(const std::vector<std::vector<DyadicInterval>>& boxes);

/// Coordinate k-plane e_S used to parameterise points of a plane: S maximises
/// the certified sigma_min of V restricted to e_S, ties to the first subset.
struct PlaneChart {
  std::vector<std::size_t> subset;
};
PlaneChart plane_chart(const AffinePlane& p);

/// V x' + t with x' = coords embedded into e_S. Lies on P exactly.
RatVector point_on_plane(const AffinePlane& p, const PlaneChart& chart, const RatVector& coords);
RatVector point_on_plane(const AffinePlane& p, const RatVector& coords);

/// Exact test V (x - t) == x - t.
bool lies_on(const AffinePlane& p, const RatVector& x);

AffinePlane line_to_affine(const LineParams& lp);
/// Throws VerticalLine when the direction is orthogonal to the x_1 axis.
LineParams affine_to_line(const AffinePlane& p);

AffinePlane hyperplane_to_affine(const HyperplaneParams& hp);
/// Throws VerticalHyperplane when the plane is not a graph over x_1..x_{n-1}.
HyperplaneParams affine_to_hyperplane(const AffinePlane& p);

/// Exact (n-2)-plane P1 ∩ P2 for hyperplanes in R^n, n >= 3.
/// Throws ParallelPlanes or IdenticalPlanes.
AffinePlane hyperplane_intersection(const AffinePlane& p1, const AffinePlane& p2);

/// Distance from x to the affine plane p, enclosed.
DyadicInterval distance_to_plane(const AffinePlane& p, const RatVector& x, int precision);

struct IntersectionReport {
  int t = 0;  ///< floor(-log2 rho_affine(p1, p2)), from the enclosure midpoint
  int r = 0;
  double rho_affine = 0;
  double observed_error = 0;   ///< max over trials of dist(x, perturbed intersection)
  double predicted_scale = 0;  ///< 2^-(r - t)
  int trials = 0;
  std::string t_source = "metric";
};

/// Perturbs every parameter of both hyperplanes by uniform dyadic noise in
/// [-2^-r, 2^-r], recomputes the intersection, and records the largest
/// distance from x (a point on both planes) to the perturbed intersection.
IntersectionReport intersection_precision_report(const HyperplaneParams& hp1, const HyperplaneParams& hp2,
                                                 const RatVector& x_on_both, int r, std::uint64_t seed,
                                                 int trials = 8);

}  // namespace affgrass::affine
