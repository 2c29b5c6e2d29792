// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "affgrass/affine.hpp"
#include "affgrass/dimest.hpp"
#include "affgrass/errors.hpp"
#include "affgrass/experiments.hpp"
#include "affgrass/grassmann.hpp"
#include "affgrass/nets.hpp"
#include "affgrass/rng.hpp"
#include "affgrass/serialize.hpp"

using namespace affgrass;
using namespace affgrass::exact;

namespace {

// Pinned tolerances and budgets.
constexpr int kExactTrials = 1000;
constexpr double kExactSeconds = 60;
constexpr int kMetricPairs = 100;
constexpr int kMetricPrecision = 12;
constexpr double kMetricSeconds = 300;
constexpr int kPerturbationTrials = 10000;
constexpr int kBoxTrials = 1000;
constexpr int kComplementTrials = 1000;
constexpr int kNetProbes = 1000;
constexpr double kNetSeconds = 600;
constexpr double kSlopeTarget = 1.0;
constexpr double kSlopeTolerance = 0.2;
constexpr double kCantorTolerance = 0.05;
constexpr double kSquareTolerance = 0.05;
constexpr double kBoundTolerance = 0.1;
constexpr double kLinesBound = 1.5;
constexpr double kPlanesBound = 2.6;
constexpr double kUnionSeconds = 600;
constexpr std::uint64_t kSeed = 20261019;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RatVector random_vector(Rng& rng, std::size_t n, long range) {
  RatVector v(n);
  for (auto& x : v) x = make_rational(rng.uniform_int(-range * 8, range * 8), rng.uniform_int(1, 8));
  return v;
}

std::size_t random_dim(Rng& rng, long lo, long hi) { return static_cast<std::size_t>(rng.uniform_int(lo, hi)); }

Outcome exactness() {
  Rng rng(kSeed + 1);
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  int dependent = 0;
  for (int done = 0; done < kExactTrials;) {
    const std::size_t n = random_dim(rng, 2, 4);
    const std::size_t k = random_dim(rng, 1, static_cast<long>(n) - 1);
    std::vector<RatVector> basis;
    for (std::size_t j = 0; j < k; ++j) basis.push_back(random_vector(rng, n, 4));
    grass::GrassPoint g;
    try {
      g = grass::span_to_projection(basis);
    } catch (const DependentSpan&) {
      ++dependent;
      continue;
    }
    const bool ok = g.proj * g.proj == g.proj && g.proj.transpose() == g.proj && g.proj.trace() == Rational(k);
    failures += ok ? 0 : 1;
    ++done;
  }
  const double secs = seconds_since(start);
  return {failures == 0 && secs < kExactSeconds,
          fmt("%d bases, %d violations, %d dependent draws redrawn, %.1fs", kExactTrials, failures, dependent, secs)};
}

Outcome metric_cross_validation() {
  Rng rng(kSeed + 2);
  const auto start = std::chrono::steady_clock::now();
  int disjoint = 0;
  for (std::size_t n : {2u, 3u}) {
    for (int i = 0; i < kMetricPairs; ++i) {
      const auto v = grass::rational_grassmann_sample(n, 1, rng.next());
      const auto w = grass::rational_grassmann_sample(n, 1, rng.next());
      const auto spectral = grass::rho(v, w, kMetricPrecision).value;
      const auto grid = grass::rho_grid(v, w, kMetricPrecision).value;
      disjoint += spectral.overlaps(grid) ? 0 : 1;
    }
  }
  const double secs = seconds_since(start);
  return {disjoint == 0 && secs < kMetricSeconds,
          fmt("%d pairs on each of G(2,1), G(3,1) at p=%d, %d disjoint, %.1fs", kMetricPairs, kMetricPrecision,
              disjoint, secs)};
}

Outcome perturbation() {
  Rng rng(kSeed + 3);
  int violations = 0;
  for (int trial = 0; trial < kPerturbationTrials; ++trial) {
    const std::size_t n = random_dim(rng, 2, 4);
    const std::size_t k = random_dim(rng, 1, static_cast<long>(n) - 1);
    const RatMatrix basis = grass::rational_grassmann_sample(n, k, rng.next()).basis();
    const long e = rng.uniform_int(4, 16);
    const Rational eps = ldexp(Rational(1), -e);
    std::vector<RatVector> b;
    std::vector<RatVector> p;
    for (std::size_t j = 0; j < k; ++j) {
      RatVector col = basis.column(j);
      RatVector pert = col;
      // |delta| <= sqrt(n) eps / 4 < eps.
      for (auto& x : pert) x += rng.dyadic(-eps / 4, eps / 4, e + 4);
      b.push_back(std::move(col));
      p.push_back(std::move(pert));
    }
    violations += grass::perturbation_bound_check(b, p, eps) ? 0 : 1;
  }
  return {violations == 0, fmt("%d trials, %d violations", kPerturbationTrials, violations)};
}

Outcome reconstruction() {
  Rng rng(kSeed + 4);
  int round_trip_failures = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = random_dim(rng, 2, 4);
    const std::size_t k = random_dim(rng, 1, static_cast<long>(n) - 1);
    const auto p = affine::make_affine(grass::rational_grassmann_sample(n, k, rng.next()), random_vector(rng, n, 4));
    const auto chart = affine::plane_chart(p);
    std::vector<RatVector> pts;
    for (std::size_t j = 0; j <= k; ++j) {
      RatVector c(k);
      if (j > 0) c[j - 1] = Rational(1);
      pts.push_back(affine::point_on_plane(p, chart, c));
    }
    const auto back = affine::plane_from_points(pts);
    const auto d = affine::rho_affine(p, back, 30).value;
    round_trip_failures += (d.is_point() && d.lo_q() == 0) ? 0 : 1;
  }
  int exceeded = 0;
  int rejected = 0;
  double worst_ratio = 0;
  for (int trial = 0; trial < kBoxTrials; ++trial) {
    const int r = 10 * (1 + trial % 4);
    const std::size_t n = random_dim(rng, 2, 3);
    const std::size_t k = random_dim(rng, 1, static_cast<long>(n) - 1);
    const auto p = affine::make_affine(grass::rational_grassmann_sample(n, k, rng.next()), random_vector(rng, n, 2));
    const auto chart = affine::plane_chart(p);
    const RatVector base = random_vector(rng, k, 1);
    std::vector<std::vector<DyadicInterval>> boxes;
    for (std::size_t j = 0; j <= k; ++j) {
      RatVector c = base;
      if (j > 0) c[j - 1] += 1;
      boxes.push_back(affine::round_to_box(affine::point_on_plane(p, chart, c), r));
    }
    try {
      const auto fit = affine::plane_from_boxes(boxes);
      const auto observed = affine::rho_affine(p, fit.plane, r + 20).value;
      if (observed.hi_q() > fit.error_bound.hi_q()) ++exceeded;
      if (sgn(fit.error_bound.hi_q()) > 0) {
        worst_ratio = std::max(worst_ratio, observed.mid_double() / fit.error_bound.mid_double());
      }
    } catch (const DegeneratePointSet&) {
      ++rejected;
    }
  }
  return {round_trip_failures == 0 && exceeded == 0 && rejected == 0,
          fmt("round trip: %d/200 nonzero; boxes r in {10,20,30,40}: %d/%d over bound, %d rejected, "
              "max observed/bound %.3g",
              round_trip_failures, exceeded, kBoxTrials, rejected, worst_ratio)};
}

Outcome complement() {
  Rng rng(kSeed + 5);
  int invalid = 0;
  int mismatched = 0;
  for (int trial = 0; trial < kComplementTrials; ++trial) {
    const std::size_t n = random_dim(rng, 2, 4);
    const std::size_t k = random_dim(rng, 1, static_cast<long>(n) - 1);
    const auto v = grass::rational_grassmann_sample(n, k, rng.next());
    invalid += affine::is_valid_complement_basis(v, affine::complement_basis(v)) ? 0 : 1;
    mismatched += affine::complement_projection(v).proj == affine::complement_projection_from_span(v).proj ? 0 : 1;
  }
  return {invalid == 0 && mismatched == 0,
          fmt("%d subspaces: %d invalid bases, %d complement mismatches", kComplementTrials, invalid, mismatched)};
}

Outcome net_suite() {
  const auto start = std::chrono::steady_clock::now();
  const nets::Space s{nets::SpaceKind::grassmann, 2, 1};
  bool ok = true;
  std::string sizes;
  std::map<int, std::size_t> max_at_l;
  for (int r = 2; r <= 8; ++r) {
    const auto net = nets::build_net(s, r, 1u << 24, nets::kAuditSeed, 200);
    ok = ok && nets::certify_separation(net);
    const auto probes = nets::audit_probes(s, kNetProbes, kSeed + 6 + static_cast<std::uint64_t>(r));
    const auto audit = nets::audit_covering(net, probes, kSeed);
    ok = ok && audit.covered == kNetProbes;
    for (int l = 0; l <= 2 && r - l >= 1; ++l) {
      for (std::size_t c : nets::ball_counts(net, probes, l)) max_at_l[l] = std::max(max_at_l[l], c);
    }
    sizes += (sizes.empty() ? "" : ",") + std::to_string(net.elements.size());
  }
  // Packing bound for G(2,1): an arc of angle pi carries at most
  // (pi / 3) 2^(l+2) + 1 points 2^-(r+1)-separated inside a 2^-(r-l) ball.
  std::string maxima;
  for (const auto& [l, c] : max_at_l) {
    const auto bound = static_cast<std::size_t>(std::floor(M_PI / 3 * std::ldexp(1.0, l + 2))) + 1;
    ok = ok && c <= bound;
    maxima += fmt("%sl=%d:%zu(<=%zu)", maxima.empty() ? "" : " ", l, c, bound);
  }
  const double secs = seconds_since(start);
  return {ok && secs < kNetSeconds,
          fmt("G(2,1) r=2..8 sizes [%s], separation certified, %d probes covered; ball-count maxima %s; %.1fs",
              sizes.c_str(), kNetProbes, maxima.c_str(), secs)};
}

Outcome intersection_scaling() {
  std::vector<double> xs;
  std::vector<double> ys;
  const RatVector x_on_both{Rational(0), Rational(1), Rational(0)};
  for (int t = 2; t <= 10; ++t) {
    const Rational eps = ldexp(Rational(1), -t);
    const affine::HyperplaneParams h1{RatVector{eps, Rational(0)}, Rational(0)};
    const affine::HyperplaneParams h2{RatVector{-eps, Rational(0)}, Rational(0)};
    for (int r = 20; r <= 40; ++r) {
      const auto rep = affine::intersection_precision_report(h1, h2, x_on_both, r, kSeed + 100 * t + r);
      xs.push_back(rep.t - r);
      ys.push_back(std::log2(rep.observed_error));
    }
  }
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return {std::abs(slope - kSlopeTarget) <= kSlopeTolerance,
          fmt("slope %.4f over %zu (t, r) cells, target %.1f +- %.1f", slope, xs.size(), kSlopeTarget,
              kSlopeTolerance)};
}

const exp::BoundReport& find(const std::vector<exp::BoundReport>& reports, const std::string& id) {
  for (const auto& r : reports) {
    if (r.id == id) return r;
  }
  throw PreconditionViolation("standard suite has no report " + id);
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "exact projections", exactness);
  report(2, "metric cross-validation", metric_cross_validation);
  report(3, "perturbation bound", perturbation);
  report(4, "plane reconstruction", reconstruction);
  report(5, "complement bases", complement);
  report(6, "net suite", net_suite);
  report(7, "intersection precision scaling", intersection_scaling);

  const auto suite = exp::standard_suite();
  const auto start = std::chrono::steady_clock::now();
  std::vector<exp::BoundReport> first;
  std::string suite_error;
  try {
    first = exp::run_suite(suite);
  } catch (const std::exception& e) {
    suite_error = e.what();
  }
  const double suite_secs = seconds_since(start);
  auto need_suite = [&] {
    if (!suite_error.empty()) throw std::runtime_error("suite failed: " + suite_error);
  };

  report(8, "dimension calibration", [&] {
    need_suite();
    const auto& c = find(first, "cal-cantor");
    const auto& q = find(first, "cal-square");
    const double cantor_target = std::log(2.0) / std::log(3.0);
    return Outcome{std::abs(c.measured.slope - cantor_target) <= kCantorTolerance &&
                       std::abs(q.measured.slope - 2.0) <= kSquareTolerance,
                   fmt("Cantor %.4f (target %.4f +- %.2f), square %.4f (target 2 +- %.2f)", c.measured.slope,
                       cantor_target, kCantorTolerance, q.measured.slope, kSquareTolerance)};
  });
  report(9, "union of lines", [&] {
    need_suite();
    const auto& u = find(first, "union-lines-full");
    const double bound = exp::union_bound_general(2, 1, 1.0, *u.t_measured);
    return Outcome{u.measured.slope >= kLinesBound - kBoundTolerance && suite_secs < kUnionSeconds,
                   fmt("dim %.4f, measured t %.4f (formula at t: %.4f), required >= %.2f - %.2f", u.measured.slope,
                       *u.t_measured, bound, kLinesBound, kBoundTolerance)};
  });
  report(10, "union of planes", [&] {
    need_suite();
    const auto& u = find(first, "union-planes-full");
    const double bound = exp::union_bound_hyperplane(3, *u.t_measured);
    return Outcome{u.measured.slope >= kPlanesBound - kBoundTolerance,
                   fmt("dim %.4f, measured t %.4f (formula at t: %.4f), required >= %.2f - %.2f", u.measured.slope,
                       *u.t_measured, bound, kPlanesBound, kBoundTolerance)};
  });
  report(11, "extension checks", [&] {
    need_suite();
    bool ok = true;
    std::string detail;
    for (const auto& r : first) {
      if (r.id.rfind("ext-", 0) != 0) continue;
      const double e = r.reference->slope;
      const double f = r.measured.slope;
      bool pass = r.satisfied && r.tolerance <= kBoundTolerance;
      if (r.check == "extension_hyperplane_fulldim") pass = pass && std::abs(f - e) <= kBoundTolerance;
      ok = ok && pass;
      detail += fmt("%s%s F=%.3f E=%.3f bound=%.3f %s", detail.empty() ? "" : "; ", r.id.c_str(), f, e,
                    r.bound_value, pass ? "ok" : "violated");
    }
    return Outcome{ok && !detail.empty(), detail};
  });
  report(12, "determinism", [&] {
    need_suite();
    const auto second = exp::run_suite(suite);
    std::string a;
    std::string b;
    for (const auto& r : first) a += io::to_json(r).dump() + "\n";
    for (const auto& r : second) b += io::to_json(r).dump() + "\n";
    return Outcome{a == b, fmt("%zu reports, %zu bytes, rerun %s (first run %.1fs)", first.size(), a.size(),
                               a == b ? "identical" : "differs", suite_secs)};
  });

  std::printf("%s: %d of 12 criteria failed\n", failed == 0 ? "ACCEPTED" : "REJECTED", failed);
  return failed == 0 ? 0 : 1;
}
