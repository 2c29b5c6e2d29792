#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "affgrass/exact/certified.hpp"
#include "affgrass/exact/dyadic.hpp"
#include "affgrass/exact/matrix.hpp"

namespace affgrass::grass {

using exact::DyadicInterval;
using exact::RatMatrix;
using exact::Rational;
using exact::RatVector;

/// A k-dimensional linear subspace of R^n stored as its orthogonal projection.
/// Invariant: proj^2 == proj == proj^T and trace(proj) == k, exactly.
struct GrassPoint {
  std::size_t n = 0;
  std::size_t k = 0;
  RatMatrix proj;

  /// Validates membership; throws PreconditionViolation otherwise.
  static GrassPoint from_projection(RatMatrix proj, std::size_t k);

  /// The lexicographically first columns of proj spanning the subspace (n x k).
  RatMatrix basis() const;
  /// Projection onto the orthogonal complement, a point of G(n, n-k).
  GrassPoint complement() const;

  friend bool operator==(const GrassPoint&, const GrassPoint&) = default;
};

enum class MetricMethod { spectral, grid };
std::string_view to_string(MetricMethod m);
MetricMethod parse_metric_method(std::string_view s);

struct MetricSample {
  DyadicInterval value;
  MetricMethod method = MetricMethod::spectral;
  int precision = 0;
};

bool is_grassmann(const RatMatrix& q, std::size_t k);

/// A (A^T A)^{-1} A^T for the column matrix A of the basis. Throws DependentSpan.
GrassPoint span_to_projection(const std::vector<RatVector>& basis);
GrassPoint span_to_projection(const RatMatrix& columns);

/// rho^2 = |proj(v) - proj(w)|_op^2 as a refinable real. Exactly rational
/// whenever min(k, n-k) == 1.
class RhoSquared {
 public:
  RhoSquared(const GrassPoint& v, const GrassPoint& w);

  const std::optional<Rational>& exact() const { return exact_; }
  /// Rational bounds with hi - lo <= 2^-bits.
  std::pair<Rational, Rational> bounds(long bits);
  /// Exact comparison of rho with c >= 0.
  std::strong_ordering compare_rho(const Rational& c) const;

 private:
  std::optional<Rational> exact_;
  std::optional<exact::SturmChain> chain_;
  std::optional<exact::RealRoot> root_;
};

/// Operator-norm distance of the projections. Throws DimensionMismatch when
/// (n, k) differ.
MetricSample rho(const GrassPoint& v, const GrassPoint& w, int precision,
                 MetricMethod method = MetricMethod::spectral);

/// Grid reference for rho, n <= 4: maximises |Du|^2 / |u|^2 over dyadic u with
/// spacing g in the shell 1 - g <= |u| <= 1 + g. Every unit x is within
/// e = g sqrt(n) / 2 of the grid, so rho^2 <= M / (1 - e^2). g is halved
/// until the enclosure meets the precision.
MetricSample rho_grid(const GrassPoint& v, const GrassPoint& w, int precision);

/// Exact comparison of rho(v, w) with c >= 0.
std::strong_ordering compare_rho(const GrassPoint& v, const GrassPoint& w, const Rational& c);

/// sup over unit v1 in V1 of inf over unit v2 in V2 of |v1 - v2|, via
/// m^2 = 2 - 2 sqrt(lambda_min) where lambda_min is the smallest eigenvalue of
/// (A^T A)^{-1} A^T proj(w) A for a basis A of V1. lambda_min == 0 (some v1
/// orthogonal to V2) gives sqrt(2), which is the correct value there.
MetricSample m_dist(const GrassPoint& v, const GrassPoint& w, int precision);

/// Checks m(span basis, span perturbed) <= n eps / sigma with certified
/// enclosures. Requires |basis_i - perturbed_i| < eps exactly and an
/// independent basis; throws PreconditionViolation otherwise.
bool perturbation_bound_check(const std::vector<RatVector>& basis,
                              const std::vector<RatVector>& perturbed, const Rational& eps);

/// Random rational basis (entries a/b, |a| <= 8, 1 <= b <= 8) mapped through
/// span_to_projection. Requires 1 <= k < n.
GrassPoint rational_grassmann_sample(std::size_t n, std::size_t k, std::uint64_t seed);

/// Empirical metric-equivalence ratios over random pairs.
struct EquivalenceEstimate {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t pairs = 0;
  int precision = 0;
  double max_rho_over_m = 0;
  double max_m_over_rho = 0;
};

EquivalenceEstimate estimate_metric_equivalence(std::size_t n, std::size_t k, std::size_t pairs,
                                                std::uint64_t seed, int precision);

/// Configured value of the metric-equivalence constant C_{n,k}; an estimate
/// backed by estimate_metric_equivalence, not a proven constant.
Rational metric_equivalence_constant(std::size_t n, std::size_t k);

}  // namespace affgrass::grass
