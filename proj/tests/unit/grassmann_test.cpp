#include <gtest/gtest.h>

#include <cmath>

#include "affgrass/errors.hpp"
#include "affgrass/grassmann.hpp"
#include "affgrass/rng.hpp"

using namespace affgrass;
using namespace affgrass::exact;
using namespace affgrass::grass;

namespace {

RatVector vec(std::vector<long> xs) {
  RatVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

using DVec = std::vector<double>;

std::vector<DVec> orthonormal_columns(const RatMatrix& a) {
  std::vector<DVec> out;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    DVec v(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) v[i] = a(i, j).get_d();
    for (const auto& q : out) {
      double d = 0;
      for (std::size_t i = 0; i < v.size(); ++i) d += v[i] * q[i];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * q[i];
    }
    double nrm = 0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : v) x /= nrm;
    out.push_back(v);
  }
  return out;
}

// Unit vectors of a subspace of dimension 1 or 2, sampled on a fine circle.
std::vector<DVec> unit_sphere_samples(const std::vector<DVec>& q, int steps) {
  std::vector<DVec> out;
  if (q.size() == 1) {
    DVec neg = q[0];
    for (double& x : neg) x = -x;
    return {q[0], neg};
  }
  for (int s = 0; s < steps; ++s) {
    const double phi = 2 * M_PI * s / steps;
    DVec v(q[0].size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::cos(phi) * q[0][i] + std::sin(phi) * q[1][i];
    out.push_back(v);
  }
  return out;
}

// Brute-force sup-inf over sampled unit spheres; no projection formula used.
double m_bruteforce(const GrassPoint& v, const GrassPoint& w, int steps = 1500) {
  const auto s1 = unit_sphere_samples(orthonormal_columns(v.basis()), steps);
  const auto s2 = unit_sphere_samples(orthonormal_columns(w.basis()), steps);
  double sup = 0;
  for (const auto& a : s1) {
    double inf = 1e9;
    for (const auto& b : s2) {
      double d = 0;
      for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
      inf = std::min(inf, std::sqrt(d));
    }
    sup = std::max(sup, inf);
  }
  return sup;
}

}  // namespace

TEST(IsGrassmann, Examples) {
  RatMatrix d(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 1;
  EXPECT_TRUE(is_grassmann(d, 2));
  EXPECT_FALSE(is_grassmann(d, 1));
  RatMatrix half(2, 2);
  for (std::size_t i = 0; i < 2; ++i) for (std::size_t j = 0; j < 2; ++j) half(i, j) = make_rational(1, 2);
  EXPECT_TRUE(is_grassmann(half, 1));
  RatMatrix nonsym(2, 2);
  nonsym(0, 0) = 1;
  nonsym(0, 1) = 1;
  EXPECT_FALSE(is_grassmann(nonsym, 1));
  EXPECT_THROW(GrassPoint::from_projection(nonsym, 1), PreconditionViolation);
}

TEST(SpanToProjection, Examples) {
  RatMatrix e1(2, 2);
  e1(0, 0) = 1;
  EXPECT_EQ(span_to_projection({vec({1, 0})}).proj, e1);
  RatMatrix half(2, 2);
  for (std::size_t i = 0; i < 2; ++i) for (std::size_t j = 0; j < 2; ++j) half(i, j) = make_rational(1, 2);
  EXPECT_EQ(span_to_projection({vec({1, 1})}).proj, half);
  RatMatrix d(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 1;
  const GrassPoint p = span_to_projection({vec({1, 0, 0}), vec({0, 1, 0})});
  EXPECT_EQ(p.proj, d);
  EXPECT_EQ(p.k, 2u);
  EXPECT_THROW(span_to_projection({vec({1, 2}), vec({2, 4})}), DependentSpan);
}

TEST(SpanToProjection, RandomBasesAreExactProjections) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 2));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(n) - 2));
    const GrassPoint p = rational_grassmann_sample(n, k, rng.next());
    EXPECT_TRUE(is_grassmann(p.proj, k));
    EXPECT_TRUE(is_grassmann(p.complement().proj, n - k));
    // The basis drawn back out of the projection spans the same space.
    EXPECT_EQ(span_to_projection(p.basis()), p);
  }
}

TEST(Sample, Deterministic) {
  EXPECT_EQ(rational_grassmann_sample(3, 2, 42), rational_grassmann_sample(3, 2, 42));
  EXPECT_EQ(rational_grassmann_sample(3, 2, 42).proj.trace(), Rational(2));
  EXPECT_THROW(rational_grassmann_sample(3, 3, 1), PreconditionViolation);
}

TEST(Rho, Examples) {
  const GrassPoint e1 = span_to_projection({vec({1, 0})});
  const GrassPoint e2 = span_to_projection({vec({0, 1})});
  const GrassPoint diag = span_to_projection({vec({1, 1})});
  const auto same = rho(e1, e1, 20).value;
  EXPECT_TRUE(same.is_point());
  EXPECT_EQ(same.lo_q(), Rational(0));
  const auto orth = rho(e1, e2, 20).value;
  EXPECT_TRUE(orth.contains(Rational(1)));
  EXPECT_TRUE(orth.is_point());

  const auto spectral = rho(e1, diag, 20);
  const auto grid = rho(e1, diag, 12, MetricMethod::grid);
  EXPECT_EQ(grid.method, MetricMethod::grid);
  EXPECT_TRUE(spectral.value.meets_precision());
  EXPECT_TRUE(grid.value.meets_precision());
  EXPECT_TRUE(spectral.value.overlaps(grid.value));
  // sqrt(2)/2: lo^2 <= 1/2 <= hi^2 exactly.
  EXPECT_LE(spectral.value.lo_q() * spectral.value.lo_q(), make_rational(1, 2));
  EXPECT_GE(spectral.value.hi_q() * spectral.value.hi_q(), make_rational(1, 2));

  const GrassPoint plane = span_to_projection({vec({1, 0, 0}), vec({0, 1, 0})});
  EXPECT_THROW(rho(e1, plane, 10), DimensionMismatch);
}

TEST(Rho, GeneralCaseUsesEigenvalueEnclosure) {
  // G(4, 2): neither k nor n - k is one, so the characteristic-polynomial path runs.
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const GrassPoint v = rational_grassmann_sample(4, 2, seed);
    const GrassPoint w = rational_grassmann_sample(4, 2, seed + 100);
    const auto s = rho(v, w, 16).value;
    const auto g = rho_grid(v, w, 8).value;
    EXPECT_TRUE(s.meets_precision());
    EXPECT_TRUE(s.overlaps(g)) << s.mid_double() << " vs " << g.mid_double();
    // compare_rho agrees with the enclosure away from the endpoints.
    EXPECT_EQ(compare_rho(v, w, s.lo_q() - ldexp(Rational(1), -20)), std::strong_ordering::greater);
    EXPECT_EQ(compare_rho(v, w, s.hi_q() + ldexp(Rational(1), -20)), std::strong_ordering::less);
  }
}

TEST(Rho, CompareExactValues) {
  const GrassPoint e1 = span_to_projection({vec({1, 0})});
  const GrassPoint e2 = span_to_projection({vec({0, 1})});
  EXPECT_EQ(compare_rho(e1, e2, Rational(1)), std::strong_ordering::equal);
  EXPECT_EQ(compare_rho(e1, e1, Rational(0)), std::strong_ordering::equal);
  // G(4,2): coordinate planes span(e1,e2) and span(e1,e3) are at rho = 1.
  const GrassPoint a = span_to_projection({vec({1, 0, 0, 0}), vec({0, 1, 0, 0})});
  const GrassPoint b = span_to_projection({vec({1, 0, 0, 0}), vec({0, 0, 1, 0})});
  EXPECT_EQ(compare_rho(a, b, Rational(1)), std::strong_ordering::equal);
  EXPECT_EQ(compare_rho(a, b, make_rational(1, 2)), std::strong_ordering::greater);
}

TEST(Rho, SymmetricAndTriangle) {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 1));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(n) - 2));
    const GrassPoint u = rational_grassmann_sample(n, k, rng.next());
    const GrassPoint v = rational_grassmann_sample(n, k, rng.next());
    const GrassPoint w = rational_grassmann_sample(n, k, rng.next());
    const auto uv = rho(u, v, 16).value;
    EXPECT_EQ(uv, rho(v, u, 16).value);
    const auto vw = rho(v, w, 16).value;
    const auto uw = rho(u, w, 16).value;
    EXPECT_LE(uw.lo_q(), uv.hi_q() + vw.hi_q());
  }
}

TEST(Rho, SpectralAndGridOverlapLowDimension) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (auto [n, k] : {std::pair<std::size_t, std::size_t>{2, 1}, {3, 1}, {3, 2}}) {
      const GrassPoint v = rational_grassmann_sample(n, k, 2 * seed);
      const GrassPoint w = rational_grassmann_sample(n, k, 2 * seed + 1);
      EXPECT_TRUE(rho(v, w, 10).value.overlaps(rho_grid(v, w, 10).value));
    }
  }
}

TEST(MDist, Examples) {
  const GrassPoint e1 = span_to_projection({vec({1, 0})});
  const GrassPoint e2 = span_to_projection({vec({0, 1})});
  const GrassPoint diag = span_to_projection({vec({1, 1})});
  const auto same = m_dist(e1, e1, 20).value;
  EXPECT_TRUE(same.is_point());
  EXPECT_EQ(same.lo_q(), Rational(0));

  const auto orth = m_dist(e1, e2, 20).value;
  EXPECT_TRUE(orth.meets_precision());
  EXPECT_LE(orth.lo_q() * orth.lo_q(), Rational(2));
  EXPECT_GE(orth.hi_q() * orth.hi_q(), Rational(2));
  EXPECT_NEAR(orth.mid_double(), m_bruteforce(e1, e2), 1e-5);

  const auto tilt = m_dist(e1, diag, 30).value;
  EXPECT_NEAR(tilt.mid_double(), std::sqrt(2 - std::sqrt(2.0)), 1e-8);
  EXPECT_NEAR(tilt.mid_double(), m_bruteforce(e1, diag), 1e-5);
}

TEST(MDist, MatchesBruteForceOracle) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    for (auto [k1, k2] : {std::pair<std::size_t, std::size_t>{1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
      const GrassPoint v = rational_grassmann_sample(3, k1, 3 * seed + 7);
      const GrassPoint w = rational_grassmann_sample(3, k2, 3 * seed + 8);
      const auto m = m_dist(v, w, 20).value;
      EXPECT_TRUE(m.meets_precision());
      // Sampling error of the oracle is O(step^2) for the inner inf.
      EXPECT_NEAR(m.mid_double(), m_bruteforce(v, w), 2e-3) << k1 << "," << k2;
    }
  }
}

TEST(MDist, ContainedSubspaceIsZeroOrthogonalIsSqrtTwo) {
  const GrassPoint line = span_to_projection({vec({1, 2, 0})});
  const GrassPoint plane = span_to_projection({vec({1, 0, 0}), vec({0, 1, 0})});
  const GrassPoint normal = span_to_projection({vec({0, 0, 1})});
  const auto in = m_dist(line, plane, 20).value;
  EXPECT_TRUE(in.is_point());
  EXPECT_EQ(in.lo_q(), Rational(0));
  // The plane always contains a direction orthogonal to the line.
  EXPECT_NEAR(m_dist(plane, line, 20).value.mid_double(), std::sqrt(2.0), 1e-5);
  EXPECT_NEAR(m_dist(normal, plane, 20).value.mid_double(), std::sqrt(2.0), 1e-5);
}

TEST(PerturbationBound, Examples) {
  EXPECT_TRUE(perturbation_bound_check({vec({1, 0})}, {vec({1, 0})}, make_rational(1, 1000)));
  const Rational delta = make_rational(1, 64);
  EXPECT_TRUE(perturbation_bound_check({vec({1, 0})}, {RatVector{Rational(1), delta}},
                                       delta + make_rational(1, 4096)));
  EXPECT_THROW(perturbation_bound_check({vec({1, 0})}, {RatVector{Rational(1), delta}}, delta),
               PreconditionViolation);
}

TEST(PerturbationBound, RandomizedTrials) {
  Rng rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 2));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(n) - 2));
    const RatMatrix basis = rational_grassmann_sample(n, k, rng.next()).basis();
    const long e = rng.uniform_int(4, 12);
    const Rational eps = ldexp(Rational(1), -e);
    std::vector<RatVector> b, p;
    for (std::size_t j = 0; j < k; ++j) {
      RatVector col = basis.column(j);
      RatVector pert = col;
      // Each coordinate moves by at most eps / 4, so |delta| <= eps sqrt(n) / 4 < eps.
      for (auto& x : pert) x += rng.dyadic(-eps / 4, eps / 4, e + 4);
      b.push_back(col);
      p.push_back(pert);
    }
    EXPECT_TRUE(perturbation_bound_check(b, p, eps));
  }
}

TEST(MetricEquivalence, FiniteAndStableAcrossPrecision) {
  for (auto [n, k] : {std::pair<std::size_t, std::size_t>{2, 1}, {3, 1}, {3, 2}}) {
    const auto lo = estimate_metric_equivalence(n, k, 300, 5, 12);
    const auto hi = estimate_metric_equivalence(n, k, 300, 5, 24);
    EXPECT_TRUE(std::isfinite(lo.max_rho_over_m));
    EXPECT_TRUE(std::isfinite(lo.max_m_over_rho));
    EXPECT_NEAR(lo.max_rho_over_m, hi.max_rho_over_m, 1e-2);
    EXPECT_NEAR(lo.max_m_over_rho, hi.max_m_over_rho, 1e-2);
    const double c = metric_equivalence_constant(n, k).get_d();
    EXPECT_LE(hi.max_rho_over_m, c);
    EXPECT_LE(hi.max_m_over_rho, c);
  }
}
