#include "affgrass/nets.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "affgrass/errors.hpp"
#include "affgrass/rng.hpp"
#include "numeric.hpp"

namespace affgrass::nets {

using namespace exact;

namespace {

// Elements whose approximate distance exceeds the radius by more than this
// are not examined exactly; everything that is claimed is checked exactly.
constexpr double kScreenSlack = 1e-6;

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  if (m > n) return out;
  std::vector<std::size_t> cur(m);
  for (std::size_t i = 0; i < m; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    std::size_t i = m;
    while (i > 0 && cur[i - 1] == n - m + i - 1) --i;
    if (i == 0) return out;
    ++cur[i - 1];
    for (std::size_t j = i; j < m; ++j) cur[j] = cur[j - 1] + 1;
  }
}

// Calls f(js) for every tuple js in [lo, hi]^m, lexicographically.
template <class F>
void for_each_tuple(std::size_t m, long lo, long hi, F&& f) {
  std::vector<long> js(m, lo);
  for (;;) {
    f(js);
    std::size_t i = m;
    while (i > 0 && js[i - 1] == hi) {
      js[i - 1] = lo;
      --i;
    }
    if (i == 0) return;
    ++js[i - 1];
  }
}

bool any_odd(const std::vector<long>& js) {
  return std::any_of(js.begin(), js.end(), [](long j) { return j % 2 != 0; });
}

std::vector<GrassPoint> grass_candidates(std::size_t n, std::size_t k, int depth) {
  std::vector<GrassPoint> out;
  const long scale = 1L << depth;
  const std::size_t free = (n - k) * k;
  for (const auto& s : subsets(n, k)) {
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(s.begin(), s.end(), i) == s.end()) others.push_back(i);
    }
    for_each_tuple(free, -scale, scale, [&](const std::vector<long>& js) {
      if (depth > 0 && !any_odd(js)) return;
      RatMatrix a(n, k);
      for (std::size_t j = 0; j < k; ++j) a(s[j], j) = 1;
      std::size_t idx = 0;
      for (std::size_t row : others) {
        for (std::size_t j = 0; j < k; ++j) a(row, j) = make_rational(js[idx++], scale);
      }
      out.push_back(grass::span_to_projection(a));
    });
  }
  return out;
}

std::string element_key(const Element& e) {
  if (const auto* g = std::get_if<GrassPoint>(&e)) return g->proj.to_string();
  const auto& p = std::get<AffinePlane>(e);
  return p.direction.proj.to_string() + "|" + to_string(p.translation);
}

Rational dyadic_radius(int exponent) { return ldexp(Rational(1), -exponent); }

// First element in insertion order within c of x, or -1.
long first_within(const Net& net, const Element& x, const FloatElement& xf, const Rational& c, double* dist) {
  const double cf = c.get_d() + kScreenSlack;
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    const double d = approx_distance(net.approx[i], xf);
    if (d > cf) continue;
    if (compare_distance(net.elements[i], x, c) != std::strong_ordering::greater) {
      if (dist) *dist = d;
      return static_cast<long>(i);
    }
  }
  return -1;
}

bool far_from_all(const Net& net, const Element& x, const FloatElement& xf) {
  const double cf = net.separation.get_d() + kScreenSlack;
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    if (approx_distance(net.approx[i], xf) > cf) continue;
    if (compare_distance(net.elements[i], x, net.separation) == std::strong_ordering::less) return false;
  }
  return true;
}

}  // namespace

std::string Space::to_string() const {
  return std::string(kind == SpaceKind::grassmann ? "G" : "A") + "(" + std::to_string(n) + "," +
         std::to_string(k) + ")";
}

std::strong_ordering compare_distance(const Element& a, const Element& b, const Rational& c) {
  if (a.index() != b.index()) throw DimensionMismatch("elements of different spaces");
  if (const auto* g = std::get_if<GrassPoint>(&a)) return grass::compare_rho(*g, std::get<GrassPoint>(b), c);
  return affine::compare_rho_affine(std::get<AffinePlane>(a), std::get<AffinePlane>(b), c);
}

FloatElement to_float(const Element& e) {
  FloatElement f;
  const GrassPoint& v = std::holds_alternative<GrassPoint>(e) ? std::get<GrassPoint>(e)
                                                              : std::get<AffinePlane>(e).direction;
  f.n = v.n;
  f.k = v.k;
  for (const auto& x : v.proj.entries()) f.proj.push_back(x.get_d());
  if (const auto* p = std::get_if<AffinePlane>(&e)) {
    for (const auto& x : p->translation) f.translation.push_back(x.get_d());
  }
  return f;
}

double approx_distance(const FloatElement& a, const FloatElement& b) {
  const std::size_t n = a.n;
  double rho;
  if (a.k == 1 || a.k + 1 == n) {
    double tr = 0;
    for (std::size_t i = 0; i < n * n; ++i) tr += a.proj[i] * b.proj[i];
    const double r2 = (a.k == 1 ? 1.0 : static_cast<double>(n - 1)) - tr;
    rho = std::sqrt(std::max(0.0, r2));
  } else {
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n * n; ++i) d[i] = a.proj[i] - b.proj[i];
    rho = numeric::symmetric_spectral_norm(std::move(d), n);
  }
  double t2 = 0;
  for (std::size_t i = 0; i < a.translation.size(); ++i) {
    const double dt = a.translation[i] - b.translation[i];
    t2 += dt * dt;
  }
  return rho + std::sqrt(t2);
}

double approx_distance(const Element& a, const Element& b) { return approx_distance(to_float(a), to_float(b)); }

std::vector<Element> candidates_at_depth(const Space& space, int depth) {
  if (space.k < 1 || space.k >= space.n) throw PreconditionViolation("net spaces need 1 <= k < n");
  std::vector<Element> out;
  if (space.kind == SpaceKind::grassmann) {
    for (auto& g : grass_candidates(space.n, space.k, depth)) out.emplace_back(std::move(g));
    return out;
  }
  const std::size_t m = space.n - space.k;
  const long scale = 1L << depth;
  std::unordered_set<std::string> seen;
  for (int dd = 0; dd <= depth; ++dd) {
    for (auto& v : grass_candidates(space.n, space.k, dd)) {
      if (!seen.insert(v.proj.to_string()).second) continue;
      const affine::ComplementBasis basis = affine::complement_basis(v);
      const RatMatrix b = basis.matrix();
      for_each_tuple(m, 0, scale, [&](const std::vector<long>& js) {
        if (dd < depth && depth > 0 && !any_odd(js)) return;
        RatVector coords;
        for (long j : js) coords.push_back(make_rational(j, scale));
        RatVector t = b * coords;
        out.emplace_back(AffinePlane{v, std::move(coords), basis, std::move(t)});
      });
    }
  }
  return out;
}

std::vector<Element> audit_probes(const Space& space, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Element> out;
  constexpr long bits = 16;
  while (out.size() < count) {
    RatMatrix a(space.n, space.k);
    for (std::size_t i = 0; i < space.n; ++i) {
      for (std::size_t j = 0; j < space.k; ++j) a(i, j) = rng.normal_dyadic(bits);
    }
    if (rank(a) < space.k) continue;
    GrassPoint v = grass::span_to_projection(a);
    if (space.kind == SpaceKind::grassmann) {
      out.emplace_back(std::move(v));
      continue;
    }
    affine::ComplementBasis basis = affine::complement_basis(v);
    RatVector coords;
    for (std::size_t j = 0; j < space.n - space.k; ++j) coords.push_back(rng.dyadic(Rational(0), Rational(1), bits));
    RatVector t = basis.matrix() * coords;
    out.emplace_back(AffinePlane{std::move(v), std::move(coords), std::move(basis), std::move(t)});
  }
  return out;
}

Net build_net(const Space& space, int r, std::size_t candidate_budget, std::uint64_t audit_seed,
              std::size_t probes, Exec exec) {
  if (r < 1) throw PreconditionViolation("net scale needs r >= 1");
  Net net;
  net.space = space;
  net.r = r;
  net.separation = dyadic_radius(r + 1);
  const std::vector<Element> probe_set = audit_probes(space, probes, audit_seed);
  std::unordered_set<std::string> seen;
  for (int depth = 0;; ++depth) {
    for (auto& cand : candidates_at_depth(space, depth)) {
      if (net.candidates_examined >= candidate_budget) {
        throw BudgetExhausted("covering audit did not pass within " + std::to_string(candidate_budget) +
                              " candidates");
      }
      ++net.candidates_examined;
      if (!seen.insert(element_key(cand)).second) continue;
      FloatElement f = to_float(cand);
      if (far_from_all(net, cand, f)) {
        net.elements.push_back(std::move(cand));
        net.approx.push_back(std::move(f));
      }
    }
    net.audit = audit_covering(net, probe_set, audit_seed, exec);
    if (net.audit.covered == net.audit.probes) {
      net.depth = depth;
      return net;
    }
  }
}

bool certify_separation(const Net& net, Exec exec) {
  const long size = static_cast<long>(net.elements.size());
  bool ok = true;
  auto row = [&](long i) {
    for (long j = i + 1; j < size; ++j) {
      if (compare_distance(net.elements[i], net.elements[j], net.separation) == std::strong_ordering::less) {
        return false;
      }
    }
    return true;
  };
  if (exec == Exec::serial) {
    for (long i = 0; i < size && ok; ++i) ok = row(i);
    return ok;
  }
#pragma omp parallel for schedule(dynamic, 4) reduction(&& : ok)
  for (long i = 0; i < size; ++i) ok = ok && row(i);
  return ok;
}

CoverAudit audit_covering(const Net& net, const std::vector<Element>& probes, std::uint64_t seed, Exec exec) {
  const Rational cover = dyadic_radius(net.r);
  const long count = static_cast<long>(probes.size());
  std::vector<double> dist(probes.size(), -1);
  auto one = [&](long i) {
    double d = 0;
    if (first_within(net, probes[i], to_float(probes[i]), cover, &d) >= 0) dist[i] = d;
  };
  if (exec == Exec::serial) {
    for (long i = 0; i < count; ++i) one(i);
  } else {
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < count; ++i) one(i);
  }
  CoverAudit audit;
  audit.probes = probes.size();
  audit.seed = seed;
  for (double d : dist) {
    if (d < 0) continue;
    ++audit.covered;
    audit.max_rep_distance = std::max(audit.max_rep_distance, d);
  }
  return audit;
}

BallCount ball_count(const Net& net, const Element& x, int l) {
  if (net.r - l < 1) throw PreconditionViolation("ball_count needs r - l >= 1");
  const Rational radius = dyadic_radius(net.r - l);
  const double cf = radius.get_d() + kScreenSlack;
  const FloatElement xf = to_float(x);
  BallCount bc{x, l, 0, 0};
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    if (approx_distance(net.approx[i], xf) > cf) continue;
    if (compare_distance(net.elements[i], x, radius) != std::strong_ordering::greater) ++bc.count;
  }
  return bc;
}

std::vector<std::size_t> ball_counts(const Net& net, const std::vector<Element>& xs, int l, Exec exec) {
  std::vector<std::size_t> out(xs.size());
  const long count = static_cast<long>(xs.size());
  if (exec == Exec::serial) {
    for (long i = 0; i < count; ++i) out[i] = ball_count(net, xs[i], l).count;
    return out;
  }
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < count; ++i) out[i] = ball_count(net, xs[i], l).count;
  return out;
}

const Element& canonical_rep(const Net& net, const Element& x) {
  const long i = first_within(net, x, to_float(x), dyadic_radius(net.r), nullptr);
  if (i < 0) throw NotCovered("no net element within 2^-" + std::to_string(net.r));
  return net.elements[static_cast<std::size_t>(i)];
}

}  // namespace affgrass::nets
