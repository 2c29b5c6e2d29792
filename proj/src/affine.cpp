#include "affgrass/affine.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "affgrass/errors.hpp"
#include "affgrass/rng.hpp"

namespace affgrass::affine {

using namespace exact;

namespace {

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(m);
  for (std::size_t i = 0; i < m; ++i) cur[i] = i;
  if (m > n) return out;
  for (;;) {
    out.push_back(cur);
    std::size_t i = m;
    while (i > 0 && cur[i - 1] == n - m + i - 1) --i;
    if (i == 0) return out;
    ++cur[i - 1];
    for (std::size_t j = i; j < m; ++j) cur[j] = cur[j - 1] + 1;
  }
}

// First index whose upper bound reaches the largest lower bound.
std::size_t certified_argmax(const std::vector<std::pair<Rational, Rational>>& enclosures) {
  Rational best_lo = enclosures.front().first;
  for (const auto& e : enclosures) best_lo = std::max(best_lo, e.first);
  for (std::size_t i = 0; i < enclosures.size(); ++i) {
    if (enclosures[i].second >= best_lo) return i;
  }
  return 0;
}

constexpr long kSelectionBits = 40;

RatVector complement_vector(const GrassPoint& v, std::size_t i) {
  RatVector e = unit_vector(v.n, i);
  return sub(e, v.proj * e);
}

bool sigma_at_least_half(const RatMatrix& a) {
  if (rank(a) < a.cols()) return false;
  // sigma_min >= 1/2 iff no eigenvalue of a^T a lies below 1/4.
  return SturmChain(char_poly(a.transpose() * a)).count_below(make_rational(1, 4)) == 0;
}

bool norm_in_window(const RatVector& x) {
  const Rational q = norm_squared(x);
  return make_rational(1, 4) <= q && q <= Rational(4);
}

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) {
    return std::nullopt;
  }
  Integer num, den;
  mpz_sqrt(num.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), q.get_den_mpz_t());
  return Rational(num, den);
}

RatVector normal_of(const GrassPoint& hyper) {
  const RatMatrix c = RatMatrix::identity(hyper.n) - hyper.proj;
  return c.column(pivot_columns(c).front());
}

void require_hyperplane(const AffinePlane& p) {
  if (p.k() + 1 != p.n()) throw PreconditionViolation("expected a hyperplane (k = n - 1)");
}

}  // namespace

ComplementBasis complement_basis(const GrassPoint& v) {
  if (v.k < 1 || v.k >= v.n) throw PreconditionViolation("complement_basis needs 1 <= k < n");
  const std::size_t m = v.n - v.k;
  std::optional<std::vector<std::size_t>> first_independent;
  for (const auto& s : subsets(v.n, m)) {
    std::vector<RatVector> cand;
    for (std::size_t i : s) cand.push_back(complement_vector(v, i));
    const RatMatrix a = RatMatrix::from_columns(cand);
    if (rank(a) < m) continue;
    if (!first_independent) first_independent = s;
    bool ok = true;
    for (const auto& x : cand) ok = ok && norm_in_window(x);
    if (ok && sigma_at_least_half(a)) return ComplementBasis{cand};
  }
  // Orthogonal vectors with norms in [1/2, 1) have sigma_min >= 1/2.
  std::vector<RatVector> ortho;
  for (std::size_t i : *first_independent) {
    RatVector w = complement_vector(v, i);
    for (const auto& q : ortho) w = sub(w, scale(dot(w, q) / norm_squared(q), q));
    while (norm_squared(w) >= Rational(1)) w = scale(make_rational(1, 2), w);
    while (norm_squared(w) < make_rational(1, 4)) w = scale(Rational(2), w);
    ortho.push_back(w);
  }
  return ComplementBasis{ortho};
}

bool is_valid_complement_basis(const GrassPoint& v, const ComplementBasis& b) {
  if (b.vectors.size() != v.n - v.k) return false;
  for (const auto& x : b.vectors) {
    if (x.size() != v.n || !norm_in_window(x) || !is_zero(v.proj * x)) return false;
  }
  return sigma_at_least_half(b.matrix());
}

GrassPoint complement_projection(const GrassPoint& v) { return v.complement(); }

GrassPoint complement_projection_from_span(const GrassPoint& v) {
  const std::size_t m = v.n - v.k;
  std::vector<RatMatrix> cands;
  std::vector<std::pair<Rational, Rational>> sigmas;
  for (const auto& s : subsets(v.n, m)) {
    std::vector<RatVector> cols;
    for (std::size_t i : s) cols.push_back(complement_vector(v, i));
    RatMatrix a = RatMatrix::from_columns(cols);
    if (rank(a) < m) continue;
    const DyadicInterval sig = sigma_min_nonzero(a, kSelectionBits);
    sigmas.emplace_back(sig.lo_q(), sig.hi_q());
    cands.push_back(std::move(a));
  }
  return grass::span_to_projection(cands[certified_argmax(sigmas)]);
}

AffinePlane make_affine(const GrassPoint& v, const RatVector& point) {
  if (point.size() != v.n) throw ShapeMismatch("point length differs from ambient dimension");
  ComplementBasis basis = complement_basis(v);
  const RatMatrix b = basis.matrix();
  const RatMatrix bt = b.transpose();
  const RatVector t = sub(point, v.proj * point);
  RatVector coords = solve(bt * b, bt * t);
  return AffinePlane{v, std::move(coords), std::move(basis), t};
}

MetricSample rho_affine(const AffinePlane& p1, const AffinePlane& p2, int precision) {
  const DyadicInterval r = grass::rho(p1.direction, p2.direction, precision + 2).value;
  const DyadicInterval d = norm_enclosure(sub(p1.translation, p2.translation), precision + 2);
  DyadicInterval sum = add(r, d);
  sum.precision = precision;
  return {sum, grass::MetricMethod::spectral, precision};
}

std::strong_ordering compare_rho_affine(const AffinePlane& p1, const AffinePlane& p2, const Rational& c) {
  grass::RhoSquared r2(p1.direction, p2.direction);
  const Rational d2 = norm_squared(sub(p1.translation, p2.translation));
  if (r2.exact()) return compare_sqrt_sum(*r2.exact(), d2, c);
  if (auto d = rational_sqrt(d2)) {
    if (c - *d < 0) return std::strong_ordering::greater;
    return r2.compare_rho(c - *d);
  }
  for (long bits = 32; bits <= 2048; bits *= 2) {
    auto [lo2, hi2] = r2.bounds(2 * bits);
    auto [dlo, dhi] = sqrt_bounds(d2, bits);
    const Rational lo = sqrt_bounds(lo2, bits).first + dlo;
    const Rational hi = sqrt_bounds(hi2, bits).second + dhi;
    if (lo > c) return std::strong_ordering::greater;
    if (hi < c) return std::strong_ordering::less;
  }
  // Both summands irrational and indistinguishable from c at 2^-2048.
  return std::strong_ordering::equal;
}

AffinePlane plane_from_points(const std::vector<RatVector>& points) {
  if (points.size() < 2) throw DegeneratePointSet("need at least two points");
  const std::size_t n = points.front().size();
  if (points.size() > n) throw DegeneratePointSet("k + 1 points must satisfy k < n");
  std::vector<RatVector> diffs;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].size() != n) throw ShapeMismatch("points of different lengths");
    diffs.push_back(sub(points[i], points[0]));
  }
  if (rank(RatMatrix::from_columns(diffs)) < diffs.size()) {
    throw DegeneratePointSet("points are affinely dependent");
  }
  return make_affine(grass::span_to_projection(diffs), points[0]);
}

std::vector<DyadicInterval> round_to_box(const RatVector& x, int r) {
  std::vector<DyadicInterval> box;
  for (const auto& xi : x) {
    const Dyadic lo = Dyadic::floor_at(xi, r);
    box.push_back(DyadicInterval{lo, Dyadic::from_rational(lo.to_rational() + ldexp(Rational(1), -r)), r});
  }
  return box;
}

BoxFit plane_from_boxes(const std::vector<std::vector<DyadicInterval>>& boxes) {
  if (boxes.size() < 2) throw DegeneratePointSet("need at least two boxes");
  const std::size_t n = boxes.front().size();
  const std::size_t k = boxes.size() - 1;
  const Rational width = boxes.front().front().width();
  if (sgn(width) <= 0 || width.get_num() != 1 || mpz_popcount(width.get_den_mpz_t()) != 1) {
    throw PreconditionViolation("box side must be a power of two 2^-r");
  }
  const int r = static_cast<int>(mpz_scan1(width.get_den_mpz_t(), 0));
  std::vector<RatVector> centers;
  for (const auto& box : boxes) {
    if (box.size() != n) throw ShapeMismatch("boxes of different dimensions");
    RatVector c;
    for (const auto& iv : box) {
      if (iv.width() != width) throw PreconditionViolation("boxes must share one side length");
      c.push_back(iv.midpoint());
    }
    centers.push_back(std::move(c));
  }
  std::vector<RatVector> diffs;
  for (std::size_t i = 1; i <= k; ++i) diffs.push_back(sub(centers[i], centers[0]));
  const RatMatrix a = RatMatrix::from_columns(diffs);
  if (rank(a) < k) throw DegeneratePointSet("box centers are affinely dependent");

  // Each true point is within h 2^-r of its center, so difference columns
  // move by at most eps.
  Integer root;
  mpz_sqrt(root.get_mpz_t(), Integer(static_cast<long>(n)).get_mpz_t());
  if (root * root < static_cast<long>(n)) root += 1;
  const Rational h = std::max(Rational(1), Rational(root, 2));
  const Rational eps = 2 * h * width;
  const Rational sigma = sigma_min_nonzero(a, kSelectionBits).lo_q();
  if (sigma <= static_cast<long>(k) * eps) {
    throw DegeneratePointSet("box centers too close to dependent at this precision");
  }
  const Rational c = grass::metric_equivalence_constant(n, k);
  const Rational nn = static_cast<long>(n);
  const Rational p0 = norm_enclosure(centers[0], kSelectionBits).hi_q();
  const Rational bound = (c * nn / sigma + 2 + 2 * p0 * c * c * nn / sigma) * eps;
  const Dyadic up = Dyadic::ceil_at(bound, r + 30);
  return BoxFit{plane_from_points(centers), DyadicInterval{up, up, r + 30}, r};
}

PlaneChart plane_chart(const AffinePlane& p) {
  const GrassPoint& v = p.direction;
  std::vector<std::vector<std::size_t>> cands;
  std::vector<std::pair<Rational, Rational>> lambdas;
  for (const auto& s : subsets(v.n, v.k)) {
    // sigma_min(V[:, S])^2 = lambda_min(V[S, S]) because V^T V = V.
    const RatMatrix sub_v = v.proj.principal_submatrix(s);
    if (rank(sub_v) < v.k) continue;
    auto roots = real_roots(char_poly(sub_v));
    lambdas.push_back(roots.front().bounds(kSelectionBits));
    cands.push_back(s);
  }
  return PlaneChart{cands[certified_argmax(lambdas)]};
}

RatVector point_on_plane(const AffinePlane& p, const PlaneChart& chart, const RatVector& coords) {
  if (coords.size() != p.k()) throw ShapeMismatch("expected k coordinates");
  RatVector x(p.n());
  for (std::size_t j = 0; j < coords.size(); ++j) x[chart.subset[j]] = coords[j];
  return add(p.direction.proj * x, p.translation);
}

RatVector point_on_plane(const AffinePlane& p, const RatVector& coords) {
  return point_on_plane(p, plane_chart(p), coords);
}

bool lies_on(const AffinePlane& p, const RatVector& x) {
  const RatVector d = sub(x, p.translation);
  // The complement basis spans the orthogonal complement of the direction.
  if (p.basis.vectors.size() + p.k() == p.n()) {
    return std::all_of(p.basis.vectors.begin(), p.basis.vectors.end(),
                       [&](const RatVector& b) { return sgn(dot(b, d)) == 0; });
  }
  return p.direction.proj * d == d;
}

AffinePlane line_to_affine(const LineParams& lp) {
  if (lp.slopes.size() != lp.intercepts.size() || lp.slopes.empty()) {
    throw ShapeMismatch("slopes and intercepts must be nonempty and of equal length");
  }
  RatVector p0{Rational(0)}, p1{Rational(1)};
  for (std::size_t i = 0; i < lp.slopes.size(); ++i) {
    p0.push_back(lp.intercepts[i]);
    p1.push_back(lp.slopes[i] + lp.intercepts[i]);
  }
  return plane_from_points({p0, p1});
}

LineParams affine_to_line(const AffinePlane& p) {
  if (p.k() != 1) throw PreconditionViolation("affine_to_line needs k = 1");
  const RatVector col = p.direction.proj.column(0);
  if (sgn(col[0]) == 0) throw VerticalLine("line is orthogonal to the x_1 axis");
  const RatVector at_zero = sub(p.translation, scale(p.translation[0] / col[0], col));
  LineParams lp;
  for (std::size_t i = 1; i < p.n(); ++i) {
    lp.slopes.push_back(col[i] / col[0]);
    lp.intercepts.push_back(at_zero[i]);
  }
  return lp;
}

AffinePlane hyperplane_to_affine(const HyperplaneParams& hp) {
  const std::size_t n = hp.a.size() + 1;
  if (n < 2) throw ShapeMismatch("hyperplane needs n >= 2");
  std::vector<RatVector> pts;
  RatVector base(n);
  base[n - 1] = hp.b;
  pts.push_back(base);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    RatVector q(n);
    q[i] = 1;
    q[n - 1] = hp.a[i] + hp.b;
    pts.push_back(q);
  }
  return plane_from_points(pts);
}

HyperplaneParams affine_to_hyperplane(const AffinePlane& p) {
  require_hyperplane(p);
  const std::size_t n = p.n();
  const RatVector normal = (RatMatrix::identity(n) - p.direction.proj).column(n - 1);
  if (sgn(normal[n - 1]) == 0) throw VerticalHyperplane("plane is not a graph over x_1..x_{n-1}");
  HyperplaneParams hp;
  for (std::size_t i = 0; i + 1 < n; ++i) hp.a.push_back(-normal[i] / normal[n - 1]);
  hp.b = dot(normal, p.translation) / normal[n - 1];
  return hp;
}

AffinePlane hyperplane_intersection(const AffinePlane& p1, const AffinePlane& p2) {
  require_hyperplane(p1);
  require_hyperplane(p2);
  if (p1.n() != p2.n()) throw DimensionMismatch("hyperplanes in different ambient spaces");
  const std::size_t n = p1.n();
  if (n < 3) throw PreconditionViolation("intersection needs n >= 3 (k = n - 2 >= 1)");
  const RatVector n1 = normal_of(p1.direction);
  const RatVector n2 = normal_of(p2.direction);
  if (rank(RatMatrix::from_columns(std::vector<RatVector>{n1, n2})) < 2) {
    if (p1 == p2) throw IdenticalPlanes("hyperplanes coincide");
    throw ParallelPlanes("hyperplanes are parallel");
  }
  const GrassPoint normals = grass::span_to_projection(std::vector<RatVector>{n1, n2});
  const GrassPoint v = normals.complement();
  // s = alpha n1 + beta n2 with n_i . s = n_i . t_i.
  RatMatrix gram(2, 2);
  gram(0, 0) = dot(n1, n1);
  gram(0, 1) = gram(1, 0) = dot(n1, n2);
  gram(1, 1) = dot(n2, n2);
  const RatVector coef = solve(gram, {dot(n1, p1.translation), dot(n2, p2.translation)});
  return make_affine(v, add(scale(coef[0], n1), scale(coef[1], n2)));
}

DyadicInterval distance_to_plane(const AffinePlane& p, const RatVector& x, int precision) {
  const RatVector d = sub(x, p.translation);
  return norm_enclosure(sub(d, p.direction.proj * d), precision);
}

IntersectionReport intersection_precision_report(const HyperplaneParams& hp1, const HyperplaneParams& hp2,
                                                 const RatVector& x_on_both, int r, std::uint64_t seed,
                                                 int trials) {
  const AffinePlane p1 = hyperplane_to_affine(hp1);
  const AffinePlane p2 = hyperplane_to_affine(hp2);
  if (!lies_on(p1, x_on_both) || !lies_on(p2, x_on_both)) {
    throw PreconditionViolation("x must lie on both hyperplanes");
  }
  hyperplane_intersection(p1, p2);

  IntersectionReport rep;
  rep.r = r;
  rep.trials = trials;
  rep.rho_affine = rho_affine(p1, p2, 40).value.mid_double();
  rep.t = static_cast<int>(std::floor(-std::log2(rep.rho_affine)));
  rep.predicted_scale = std::ldexp(1.0, -(r - rep.t));

  Rng rng(seed);
  const Rational noise = ldexp(Rational(1), -r);
  auto perturb = [&](const HyperplaneParams& hp) {
    HyperplaneParams q = hp;
    for (auto& ai : q.a) ai += rng.dyadic(-noise, noise, r + 10);
    q.b += rng.dyadic(-noise, noise, r + 10);
    return q;
  };
  for (int i = 0; i < trials; ++i) {
    const AffinePlane q1 = hyperplane_to_affine(perturb(hp1));
    const AffinePlane q2 = hyperplane_to_affine(perturb(hp2));
    const AffinePlane meet = hyperplane_intersection(q1, q2);
    rep.observed_error = std::max(rep.observed_error, distance_to_plane(meet, x_on_both, r + 20).mid_double());
  }
  return rep;
}

}  // namespace affgrass::affine
