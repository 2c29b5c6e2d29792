#include "affgrass/exact/certified.hpp"

#include "affgrass/errors.hpp"

namespace affgrass::exact {

std::pair<Rational, Rational> RealRoot::bounds(long bits) {
  root_.refine(bits);
  return {root_.lo(), root_.hi()};
}

std::vector<RealRoot> real_roots(const RatPolynomial& p) {
  const SturmChain chain(p);
  auto base = std::make_shared<const RatPolynomial>(chain.base());
  std::vector<RealRoot> out;
  for (auto& r : isolate_roots(*base, chain)) out.emplace_back(base, std::move(r));
  return out;
}

std::vector<RealRoot> symmetric_eigenvalues(const RatMatrix& sym) {
  if (!sym.is_symmetric()) throw PreconditionViolation("symmetric_eigenvalues: matrix not symmetric");
  return real_roots(char_poly(sym));
}

RealRoot smallest_nonzero_gram_eigenvalue(const RatMatrix& a) {
  if (a.is_zero()) throw ZeroMatrix("smallest nonzero singular value of the zero matrix");
  RatPolynomial cp = char_poly(a.transpose() * a);
  cp.strip_zero_roots();
  // a^T a is positive semidefinite, so every remaining root is positive.
  auto roots = real_roots(cp);
  if (roots.empty()) throw ZeroMatrix("no nonzero singular value");
  return std::move(roots.front());
}

SigmaEnclosure sigma_min_nonzero_detail(const RatMatrix& a, int precision) {
  RealRoot lambda = smallest_nonzero_gram_eigenvalue(a);
  DyadicInterval sigma = refine_until(precision, [&](long bits) {
    auto [lo, hi] = lambda.bounds(bits);
    return std::pair{sqrt_bounds(lo, bits).first, sqrt_bounds(hi, bits).second};
  });
  auto [lo, hi] = lambda.bounds(precision);
  return {sigma, {Dyadic::from_rational(lo), Dyadic::from_rational(hi), precision}};
}

DyadicInterval sigma_min_nonzero(const RatMatrix& a, int precision) {
  return sigma_min_nonzero_detail(a, precision).sigma;
}

DyadicInterval norm_enclosure(const RatVector& v, int precision) {
  return enclose_sqrt(norm_squared(v), precision);
}

std::strong_ordering compare_norm(const RatVector& v, const Rational& q) {
  if (sgn(q) < 0) throw PreconditionViolation("compare_norm needs q >= 0");
  return compare(norm_squared(v), q * q);
}

std::strong_ordering compare_sqrt_sum(const Rational& a, const Rational& b, const Rational& c) {
  if (sgn(a) < 0 || sgn(b) < 0) throw PreconditionViolation("compare_sqrt_sum needs a, b >= 0");
  if (sgn(c) < 0) return std::strong_ordering::greater;
  // sqrt(a) + sqrt(b) vs c  <=>  2 sqrt(ab) vs c^2 - a - b
  const Rational d = c * c - a - b;
  if (sgn(d) < 0) return std::strong_ordering::greater;
  return compare(4 * a * b, d * d);
}

}  // namespace affgrass::exact
