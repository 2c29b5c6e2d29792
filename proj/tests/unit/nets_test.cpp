#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "affgrass/errors.hpp"
#include "affgrass/nets.hpp"
#include "affgrass/rng.hpp"

using namespace affgrass;
using namespace affgrass::exact;
using namespace affgrass::nets;

namespace {

constexpr std::size_t kBudget = 1u << 20;

// Angle in [0, pi) of a line in R^2 from its projection.
double line_angle(const GrassPoint& g) {
  const double a = g.proj(0, 0).get_d();
  const double b = g.proj(0, 1).get_d();
  double th = std::atan2(2 * b, 2 * a - 1) / 2;
  if (th < 0) th += std::numbers::pi;
  return th;
}

const Net& g21_net(int r) {
  static std::map<int, Net> cache;
  auto it = cache.find(r);
  if (it == cache.end()) it = cache.emplace(r, build_net(Space{SpaceKind::grassmann, 2, 1}, r, kBudget)).first;
  return it->second;
}

}  // namespace

TEST(Space, ToString) {
  EXPECT_EQ((Space{SpaceKind::grassmann, 2, 1}).to_string(), "G(2,1)");
  EXPECT_EQ((Space{SpaceKind::affine, 3, 2}).to_string(), "A(3,2)");
}

TEST(Candidates, DepthZeroAreCoordinateSubspaces) {
  const auto c = candidates_at_depth(Space{SpaceKind::grassmann, 3, 1}, 0);
  // Free entries in {-1, 0, 1}: 3 pivot rows times 3^2 tuples.
  EXPECT_EQ(c.size(), 27u);
  const auto d1 = candidates_at_depth(Space{SpaceKind::grassmann, 2, 1}, 1);
  // j in {-2..2} with j odd: 2 subsets times 2.
  EXPECT_EQ(d1.size(), 4u);
  EXPECT_THROW(candidates_at_depth(Space{SpaceKind::grassmann, 2, 2}, 0), PreconditionViolation);
}

TEST(Candidates, AffineDepthsAreDisjoint) {
  const Space s{SpaceKind::affine, 2, 1};
  std::set<std::string> keys;
  std::size_t total = 0;
  for (int d = 0; d <= 2; ++d) {
    for (const auto& e : candidates_at_depth(s, d)) {
      const auto& p = std::get<AffinePlane>(e);
      keys.insert(p.direction.proj.to_string() + "|" + to_string(p.translation));
      ++total;
    }
  }
  EXPECT_EQ(keys.size(), total);
}

TEST(ApproxDistance, MatchesExactMetric) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 2));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(n) - 2));
    const Element a = grass::rational_grassmann_sample(n, k, rng.next());
    const Element b = grass::rational_grassmann_sample(n, k, rng.next());
    const auto enc = grass::rho(std::get<GrassPoint>(a), std::get<GrassPoint>(b), 40);
    EXPECT_NEAR(approx_distance(a, b), enc.value.mid_double(), 1e-9);
  }
}

TEST(Net, CoversGrassmannLinesAgainstAngleOracle) {
  // rho between lines in R^2 is |sin| of the angle between them.
  for (int r = 1; r <= 4; ++r) {
    const Net& net = g21_net(r);
    EXPECT_EQ(net.audit.covered, net.audit.probes);
    std::vector<double> angles;
    for (const auto& e : net.elements) angles.push_back(line_angle(std::get<GrassPoint>(e)));
    const double radius = std::ldexp(1.0, -r);
    for (int i = 0; i < 20000; ++i) {
      const double th = std::numbers::pi * i / 20000;
      double best = 2;
      for (double a : angles) best = std::min(best, std::abs(std::sin(th - a)));
      EXPECT_LE(best, radius + 1e-12) << "r=" << r << " angle=" << th;
    }
  }
}

TEST(Net, SeparationCertified) {
  for (int r = 1; r <= 5; ++r) {
    const Net& net = g21_net(r);
    EXPECT_TRUE(certify_separation(net, Exec::serial));
    EXPECT_TRUE(certify_separation(net, Exec::parallel));
  }
}

TEST(Net, SizeGrowthMatchesPackingBounds) {
  // Angular separation >= 2^-(r+1) bounds |net| <= pi 2^(r+1); covering
  // radius 2^-r in angle forces |net| >= pi 2^(r-1).
  std::size_t prev = 0;
  for (int r = 1; r <= 6; ++r) {
    const double size = static_cast<double>(g21_net(r).elements.size());
    EXPECT_GT(size, static_cast<double>(prev));
    EXPECT_LE(size, std::numbers::pi * std::ldexp(1.0, r + 1));
    EXPECT_GE(size, std::numbers::pi * std::ldexp(1.0, r - 1));
    prev = g21_net(r).elements.size();
  }
}

TEST(Net, Deterministic) {
  const Net a = build_net(Space{SpaceKind::grassmann, 3, 1}, 2, kBudget);
  const Net b = build_net(Space{SpaceKind::grassmann, 3, 1}, 2, kBudget, kAuditSeed, kAuditProbes, Exec::serial);
  ASSERT_EQ(a.elements.size(), b.elements.size());
  for (std::size_t i = 0; i < a.elements.size(); ++i) EXPECT_EQ(a.elements[i], b.elements[i]);
  EXPECT_EQ(a.audit.covered, b.audit.covered);
  EXPECT_EQ(a.audit.max_rep_distance, b.audit.max_rep_distance);
}

TEST(Net, AffineLinesInPlane) {
  const Net net = build_net(Space{SpaceKind::affine, 2, 1}, 2, kBudget, kAuditSeed, 300);
  EXPECT_EQ(net.audit.covered, net.audit.probes);
  EXPECT_LE(net.audit.max_rep_distance, 0.25 + 1e-9);
  EXPECT_TRUE(certify_separation(net));
}

TEST(Net, BudgetExhausted) {
  EXPECT_THROW(build_net(Space{SpaceKind::grassmann, 2, 1}, 6, 10), BudgetExhausted);
  EXPECT_THROW(build_net(Space{SpaceKind::grassmann, 2, 1}, 0, kBudget), PreconditionViolation);
}

TEST(BallCount, MembersCountThemselvesAndStayBounded) {
  const int r = 6;
  const Net& net = g21_net(r);
  // Ball of radius eps = 2^-(r-l) <= 1/2 spans angle 2 asin(eps) <= 2 pi eps / 3.
  for (int l = 0; l < r; ++l) {
    const auto counts = ball_counts(net, net.elements, l);
    const auto serial = ball_counts(net, net.elements, l, Exec::serial);
    EXPECT_EQ(counts, serial);
    const double bound = std::floor(std::numbers::pi / 3 * std::ldexp(1.0, l + 2)) + 1;
    for (std::size_t c : counts) {
      EXPECT_GE(c, 1u);
      EXPECT_LE(static_cast<double>(c), bound) << "l=" << l;
    }
  }
  EXPECT_THROW(ball_count(net, net.elements[0], r), PreconditionViolation);
}

TEST(CanonicalRep, IsWithinRadiusAndStable) {
  const Net& net = g21_net(4);
  const auto probes = audit_probes(net.space, 200, 99);
  for (const auto& x : probes) {
    const Element& rep = canonical_rep(net, x);
    EXPECT_NE(compare_distance(rep, x, Rational(1, 16)), std::strong_ordering::greater);
    EXPECT_EQ(canonical_rep(net, x), rep);
  }
  // A member is represented by itself or by an earlier element.
  std::size_t self = 0;
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    const Element& rep = canonical_rep(net, net.elements[i]);
    const auto pos = static_cast<std::size_t>(&rep - net.elements.data());
    EXPECT_LE(pos, i);
    self += pos == i;
  }
  EXPECT_GT(self, 0u);
}

TEST(CanonicalRep, AdjacentProbesShareRepresentative) {
  // y within 2^-(r+2) of x keeps x's representative e when
  // rho(e, x) <= 2^-r - 2^-(r+2) and no earlier element is within 2^-r + 2^-(r+2) of x.
  const int r = 5;
  const Net& net = g21_net(r);
  const Rational inner(3, 128);
  const Rational outer(5, 128);
  const Rational step(1, 512);
  Rng rng(17);
  std::size_t checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const double th = std::numbers::pi * rng.uniform01();
    const RatVector dx{Rational(std::cos(th)), Rational(std::sin(th))};
    const Element x = grass::span_to_projection({dx});
    const Element& rep = canonical_rep(net, x);
    const auto pos = static_cast<std::size_t>(&rep - net.elements.data());
    if (compare_distance(rep, x, inner) == std::strong_ordering::greater) continue;
    bool isolated = true;
    for (std::size_t i = 0; i < pos && isolated; ++i) {
      isolated = compare_distance(net.elements[i], x, outer) == std::strong_ordering::greater;
    }
    if (!isolated) continue;
    const double phi = th + 0.9 * std::ldexp(1.0, -(r + 2));
    const Element y = grass::span_to_projection({RatVector{Rational(std::cos(phi)), Rational(std::sin(phi))}});
    ASSERT_NE(compare_distance(x, y, step * 4), std::strong_ordering::greater);
    EXPECT_EQ(canonical_rep(net, y), rep);
    ++checked;
  }
  EXPECT_GT(checked, 100u);
}
