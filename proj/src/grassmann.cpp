#include "affgrass/grassmann.hpp"

#include <algorithm>
#include <cmath>

#include "affgrass/errors.hpp"
#include "affgrass/rng.hpp"

namespace affgrass::grass {

using namespace exact;

namespace {

void require_same_n(const GrassPoint& v, const GrassPoint& w) {
  if (v.n != w.n) {
    throw DimensionMismatch("ambient dimensions differ: " + std::to_string(v.n) + " vs " +
                            std::to_string(w.n));
  }
}

void require_same_nk(const GrassPoint& v, const GrassPoint& w) {
  require_same_n(v, w);
  if (v.k != w.k) {
    throw DimensionMismatch("subspace dimensions differ: " + std::to_string(v.k) + " vs " +
                            std::to_string(w.k));
  }
}

Integer lcm_of_denominators(const RatMatrix& a) {
  Integer l = 1;
  for (const auto& x : a.entries()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

// Enclosure of sqrt(x) for x known only through rational bounds.
std::pair<Rational, Rational> sqrt_of_bounds(const Rational& lo, const Rational& hi, long bits) {
  const Rational l = sgn(lo) < 0 ? Rational(0) : lo;
  return {sqrt_bounds(l, bits).first, sqrt_bounds(hi, bits).second};
}

}  // namespace

GrassPoint GrassPoint::from_projection(RatMatrix proj, std::size_t k) {
  if (!is_grassmann(proj, k)) {
    throw PreconditionViolation("matrix is not an orthogonal projection of trace " + std::to_string(k));
  }
  const std::size_t n = proj.rows();
  return GrassPoint{n, k, std::move(proj)};
}

RatMatrix GrassPoint::basis() const {
  std::vector<RatVector> cols;
  for (std::size_t j : pivot_columns(proj)) cols.push_back(proj.column(j));
  return RatMatrix::from_columns(cols);
}

GrassPoint GrassPoint::complement() const {
  return GrassPoint{n, n - k, RatMatrix::identity(n) - proj};
}

std::string_view to_string(MetricMethod m) { return m == MetricMethod::spectral ? "spectral" : "grid"; }

MetricMethod parse_metric_method(std::string_view s) {
  if (s == "spectral") return MetricMethod::spectral;
  if (s == "grid") return MetricMethod::grid;
  throw ParseError("unknown metric method '" + std::string(s) + "'");
}

bool is_grassmann(const RatMatrix& q, std::size_t k) {
  if (q.rows() != q.cols()) throw ShapeMismatch("is_grassmann needs a square matrix");
  return q.is_symmetric() && q * q == q && q.trace() == Rational(static_cast<long>(k));
}

GrassPoint span_to_projection(const RatMatrix& a) {
  const std::size_t k = a.cols();
  if (k == 0 || rank(a) < k) {
    throw DependentSpan("basis of " + std::to_string(k) + " vectors has rank " + std::to_string(rank(a)));
  }
  const RatMatrix at = a.transpose();
  return GrassPoint{a.rows(), k, a * inverse(at * a) * at};
}

GrassPoint span_to_projection(const std::vector<RatVector>& basis) {
  if (basis.empty()) throw DependentSpan("empty basis");
  const std::size_t n = basis.front().size();
  for (const auto& v : basis) {
    if (v.size() != n) throw ShapeMismatch("basis vectors of different lengths");
  }
  return span_to_projection(RatMatrix::from_columns(basis));
}

RhoSquared::RhoSquared(const GrassPoint& v, const GrassPoint& w) {
  require_same_nk(v, w);
  const auto n = static_cast<long>(v.n);
  const auto k = static_cast<long>(v.k);
  // For lines the difference of projections has eigenvalues +-sin(theta) and
  // trace(PQ) = cos^2(theta); hyperplanes reduce to lines via complements.
  if (k == 1) {
    exact_ = 1 - frobenius_inner(v.proj, w.proj);
  } else if (k == n - 1) {
    exact_ = Rational(n - 1) - frobenius_inner(v.proj, w.proj);
  } else {
    const RatMatrix d = v.proj - w.proj;
    if (d.is_zero()) {
      exact_ = 0;
    } else {
      chain_.emplace(char_poly(d * d));
    }
  }
}

std::pair<Rational, Rational> RhoSquared::bounds(long bits) {
  if (exact_) return {*exact_, *exact_};
  if (!root_) root_.emplace(std::move(real_roots(chain_->base()).back()));
  return root_->bounds(bits);
}

std::strong_ordering RhoSquared::compare_rho(const Rational& c) const {
  if (sgn(c) < 0) throw PreconditionViolation("compare_rho needs c >= 0");
  const Rational c2 = c * c;
  if (exact_) return compare(*exact_, c2);
  // rho^2 is the largest root of char_poly(D^2); all roots are real and >= 0.
  const std::size_t above = chain_->count_at_least(c2);
  if (above == 0) return std::strong_ordering::less;
  if (above == 1 && chain_->base().sign_at(c2) == 0) return std::strong_ordering::equal;
  return std::strong_ordering::greater;
}

std::strong_ordering compare_rho(const GrassPoint& v, const GrassPoint& w, const Rational& c) {
  return RhoSquared(v, w).compare_rho(c);
}

MetricSample rho(const GrassPoint& v, const GrassPoint& w, int precision, MetricMethod method) {
  if (method == MetricMethod::grid) return rho_grid(v, w, precision);
  RhoSquared r2(v, w);
  DyadicInterval value = r2.exact() ? enclose_sqrt(*r2.exact(), precision)
                                    : refine_until(precision, [&](long bits) {
                                        auto [lo, hi] = r2.bounds(2 * bits + 4);
                                        return sqrt_of_bounds(lo, hi, bits + 2);
                                      });
  return {value, MetricMethod::spectral, precision};
}

MetricSample rho_grid(const GrassPoint& v, const GrassPoint& w, int precision) {
  require_same_nk(v, w);
  const std::size_t n = v.n;
  if (n > 4) throw PreconditionViolation("grid method supports n <= 4");
  const RatMatrix d = v.proj - w.proj;
  if (d.is_zero()) return {DyadicInterval{Dyadic(0), Dyadic(0), precision}, MetricMethod::grid, precision};

  const Integer l = lcm_of_denominators(d);
  std::vector<Integer> di(n * n);
  std::vector<double> df(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      di[i * n + j] = Integer(d(i, j) * l);
      df[i * n + j] = d(i, j).get_d();
    }
  }

  for (long level = 3;; ++level) {
    const long big_n = 1L << level;  // grid spacing g = 1 / big_n
    const long lo2 = (big_n - 1) * (big_n - 1);
    const long hi2 = (big_n + 1) * (big_n + 1);
    Integer best_num = 0;  // |Di u|^2
    long best_den = 1;     // |u|^2 (integer grid units)
    double best_f = 0;
    std::vector<long> u(n, -(big_n + 1));
    std::vector<Integer> du(n);
    Integer num;

    auto consider = [&] {
      // Hemisphere: the first nonzero coordinate is positive.
      for (long x : u) {
        if (x != 0) {
          if (x < 0) return;
          break;
        }
      }
      long den = 0;
      for (long x : u) den += x * x;
      double nf = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < n; ++j) s += df[i * n + j] * static_cast<double>(u[j]);
        nf += s * s;
      }
      const double ratio = nf / static_cast<double>(den);
      if (ratio < best_f * (1 - 1e-9)) return;
      num = 0;
      for (std::size_t i = 0; i < n; ++i) {
        du[i] = 0;
        for (std::size_t j = 0; j < n; ++j) du[i] += di[i * n + j] * u[j];
        num += du[i] * du[i];
      }
      if (num * best_den > best_num * den) {
        best_num = num;
        best_den = den;
        best_f = std::max(best_f, ratio);
      }
    };

    // Enumerate the first n-1 coordinates; the last ranges over the shell.
    for (;;) {
      long s = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) s += u[i] * u[i];
      if (s <= hi2) {
        const long lo_sq = std::max(0L, lo2 - s);
        const long hi_sq = hi2 - s;
        long a = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(lo_sq))));
        while (a > 0 && (a - 1) * (a - 1) >= lo_sq) --a;
        while (a * a < lo_sq) ++a;
        long b = static_cast<long>(std::floor(std::sqrt(static_cast<double>(hi_sq))));
        while ((b + 1) * (b + 1) <= hi_sq) ++b;
        while (b * b > hi_sq) --b;
        for (long x = a; x <= b; ++x) {
          u[n - 1] = x;
          consider();
          if (x != 0) {
            u[n - 1] = -x;
            consider();
          }
        }
      }
      std::size_t i = 0;
      if (n == 1) break;
      for (; i + 1 < n; ++i) {
        if (++u[i] <= big_n + 1) break;
        u[i] = -(big_n + 1);
      }
      if (i + 1 == n) break;
    }

    // M = |D u|^2 / |u|^2 for the best grid u; e^2 = n g^2 / 4.
    const Rational m = Rational(best_num) / (Rational(l * l) * best_den);
    const Rational e2 = Rational(static_cast<long>(n)) / (4 * big_n * big_n);
    const long bits = precision + 4;
    const Rational lo = sqrt_bounds(m, bits).first;
    const Rational hi = sqrt_bounds(m / (1 - e2), bits).second;
    DyadicInterval value = round_outward(lo, hi, precision + 2, precision);
    if (value.meets_precision()) return {value, MetricMethod::grid, precision};
  }
}

MetricSample m_dist(const GrassPoint& v, const GrassPoint& w, int precision) {
  require_same_n(v, w);
  const RatMatrix a = v.basis();
  if (w.proj * a == a) return {DyadicInterval{Dyadic(0), Dyadic(0), precision}, MetricMethod::spectral, precision};

  std::optional<Rational> lambda_exact;
  std::optional<RealRoot> lambda_root;
  const RatMatrix at = a.transpose();
  if (v.k == 1) {
    lambda_exact = (at * w.proj * a)(0, 0) / (at * a)(0, 0);
  } else {
    // Similar to a symmetric PSD matrix, so its roots are real and in [0, 1].
    const RatMatrix mat = inverse(at * a) * (at * w.proj * a);
    lambda_root.emplace(std::move(real_roots(char_poly(mat)).front()));
  }
  auto lambda_bounds = [&](long bits) -> std::pair<Rational, Rational> {
    if (lambda_exact) return {*lambda_exact, *lambda_exact};
    return lambda_root->bounds(bits);
  };

  DyadicInterval value = refine_until(precision, [&](long bits) {
    auto [llo, lhi] = lambda_bounds(2 * bits + 4);
    auto [slo, shi] = sqrt_of_bounds(llo, lhi, 2 * bits + 4);
    return sqrt_of_bounds(2 - 2 * shi, 2 - 2 * slo, bits + 2);
  });
  return {value, MetricMethod::spectral, precision};
}

bool perturbation_bound_check(const std::vector<RatVector>& basis,
                              const std::vector<RatVector>& perturbed, const Rational& eps) {
  if (basis.empty() || basis.size() != perturbed.size()) {
    throw PreconditionViolation("basis and perturbed basis must be nonempty and of equal size");
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != perturbed[i].size()) throw ShapeMismatch("vector lengths differ");
    if (compare_norm(sub(basis[i], perturbed[i]), eps) != std::strong_ordering::less) {
      throw PreconditionViolation("perturbation " + std::to_string(i) + " is not within eps");
    }
  }
  const RatMatrix a = RatMatrix::from_columns(basis);
  if (rank(a) != basis.size()) throw PreconditionViolation("basis is not independent");
  const RatMatrix ap = RatMatrix::from_columns(perturbed);
  const auto cols = pivot_columns(ap);
  if (cols.empty()) throw PreconditionViolation("perturbed vectors are all zero");
  std::vector<RatVector> span;
  for (std::size_t j : cols) span.push_back(perturbed[j]);

  const GrassPoint v = span_to_projection(a);
  const GrassPoint vp = span_to_projection(span);
  const Rational n = static_cast<long>(a.rows());
  RealRoot sigma2 = smallest_nonzero_gram_eigenvalue(a);
  for (int bits = 24; bits <= 384; bits *= 2) {
    const DyadicInterval m = m_dist(v, vp, bits).value;
    auto [s2lo, s2hi] = sigma2.bounds(bits);
    const Rational sigma_hi = sqrt_bounds(s2hi, bits).second;
    const Rational sigma_lo = sqrt_bounds(s2lo, bits).first;
    if (m.hi_q() * sigma_hi <= n * eps) return true;
    if (m.lo_q() * sigma_lo > n * eps) return false;
  }
  return false;
}

GrassPoint rational_grassmann_sample(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k >= n) throw PreconditionViolation("need 1 <= k < n");
  Rng rng(seed);
  for (;;) {
    RatMatrix a(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) a(i, j) = make_rational(rng.uniform_int(-8, 8), rng.uniform_int(1, 8));
    }
    if (rank(a) == k) return span_to_projection(a);
  }
}

EquivalenceEstimate estimate_metric_equivalence(std::size_t n, std::size_t k, std::size_t pairs,
                                                std::uint64_t seed, int precision) {
  EquivalenceEstimate est{n, k, pairs, precision, 0, 0};
  Rng rng(seed);
  for (std::size_t i = 0; i < pairs; ++i) {
    const GrassPoint v = rational_grassmann_sample(n, k, rng.next());
    const GrassPoint w = rational_grassmann_sample(n, k, rng.next());
    const DyadicInterval r = rho(v, w, precision).value;
    const DyadicInterval m = m_dist(v, w, precision).value;
    // Pairs this close are dominated by enclosure width, not by the metrics.
    if (r.lo_q() < ldexp(Rational(1), -(precision / 2))) continue;
    const double rm = r.mid_double();
    const double mm = m.mid_double();
    est.max_rho_over_m = std::max(est.max_rho_over_m, rm / mm);
    est.max_m_over_rho = std::max(est.max_m_over_rho, mm / rm);
  }
  return est;
}

Rational metric_equivalence_constant(std::size_t, std::size_t) { return make_rational(3, 2); }

}  // namespace affgrass::grass
