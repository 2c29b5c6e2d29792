#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "affgrass/affine.hpp"
#include "affgrass/exec.hpp"
#include "affgrass/grassmann.hpp"

namespace affgrass::nets {

using affine::AffinePlane;
using exact::Rational;
using grass::GrassPoint;

enum class SpaceKind { grassmann, affine };

/// G(n, k), or A(n, k) with translation coordinates (in the complement basis)
/// restricted to [0, 1]^{n-k}.
struct Space {
  SpaceKind kind = SpaceKind::grassmann;
  std::size_t n = 2;
  std::size_t k = 1;
  std::string to_string() const;
  friend bool operator==(const Space&, const Space&) = default;
};

using Element = std::variant<GrassPoint, AffinePlane>;

/// Exact comparison of the space's metric with c >= 0.
std::strong_ordering compare_distance(const Element& a, const Element& b, const Rational& c);
/// Floating approximation of the metric, used only to order exact checks.
double approx_distance(const Element& a, const Element& b);

/// Element cached in doubles for fast approximate distances.
struct FloatElement {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> proj;
  std::vector<double> translation;  ///< empty for G(n, k)
};
FloatElement to_float(const Element& e);
double approx_distance(const FloatElement& a, const FloatElement& b);

struct CoverAudit {
  std::size_t probes = 0;
  std::size_t covered = 0;
  double max_rep_distance = 0;
  std::uint64_t seed = 0;
  std::string kind = "statistical";
};

struct Net {
  Space space;
  int r = 0;
  Rational separation;  ///< 2^-(r+1)
  std::vector<Element> elements;
  std::vector<FloatElement> approx;
  CoverAudit audit;
  std::size_t candidates_examined = 0;
  int depth = 0;  ///< enumeration depth at which the audit passed
};

/// Candidates at enumeration depth d, in order. G(n, k): for each pivot
/// k-subset S (lexicographic) the basis with identity on rows S and free
/// entries j 2^-d in [-1, 1], keeping those with some odd j (d > 0).
/// A(n, k): directions of depth <= d paired with coordinates on the 2^-d grid
/// of [0, 1]^{n-k}, keeping pairs not produced at a smaller depth.
std::vector<Element> candidates_at_depth(const Space& space, int depth);

/// Deterministic probe set: bases with standard-normal entries rounded to
/// 2^-16; A(n, k) probes add coordinates uniform on the 2^-16 grid of [0, 1]^{n-k}.
std::vector<Element> audit_probes(const Space& space, std::size_t count, std::uint64_t seed);

constexpr std::uint64_t kAuditSeed = 0x5eed0a0d17ULL;
constexpr std::size_t kAuditProbes = 1000;

/// Greedy separated net: a candidate is accepted iff it is at distance
/// >= 2^-(r+1) from every accepted element (exact). After each depth the
/// covering audit runs; construction stops once every probe is within 2^-r.
/// Throws BudgetExhausted when candidate_budget candidates were examined
/// without a passing audit.
Net build_net(const Space& space, int r, std::size_t candidate_budget, std::uint64_t audit_seed = kAuditSeed,
              std::size_t probes = kAuditProbes, Exec exec = Exec::parallel);

/// Exact check that all pairs are >= separation apart.
bool certify_separation(const Net& net, Exec exec = Exec::parallel);

/// Counts probes that have a net element within 2^-r, certified exactly.
CoverAudit audit_covering(const Net& net, const std::vector<Element>& probes, std::uint64_t seed,
                          Exec exec = Exec::parallel);

struct BallCount {
  Element center;
  int l = 0;
  std::size_t count = 0;
  std::size_t ambiguous = 0;  ///< always 0: comparisons are exact
};

/// Number of net elements in the closed ball of radius 2^-(r-l) around x.
/// Requires r - l >= 1.
BallCount ball_count(const Net& net, const Element& x, int l);

/// First element (insertion order) within 2^-r of x. Throws NotCovered.
const Element& canonical_rep(const Net& net, const Element& x);

/// ball_count(net, x, l).count for every x of the batch.
std::vector<std::size_t> ball_counts(const Net& net, const std::vector<Element>& xs, int l,
                                     Exec exec = Exec::parallel);

}  // namespace affgrass::nets
