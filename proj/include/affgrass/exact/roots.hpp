#pragma once

#include <cstddef>
#include <vector>

#include "affgrass/exact/dyadic.hpp"
#include "affgrass/exact/polynomial.hpp"

namespace affgrass::exact {

/// Sturm chain of the square-free part of a nonzero polynomial. Counts
/// distinct real roots in half-open intervals exactly.
class SturmChain {
 public:
  explicit SturmChain(const RatPolynomial& p);

  /// The square-free polynomial the chain was built from.
  const RatPolynomial& base() const { return chain_.front(); }

  /// Distinct real roots in (a, b]; requires a < b.
  std::size_t count_in(const Rational& a, const Rational& b) const;
  std::size_t count_total() const;
  /// Distinct real roots r with r >= c.
  std::size_t count_at_least(const Rational& c) const;
  /// Distinct real roots r with r < c.
  std::size_t count_below(const Rational& c) const;

  /// A power of two strictly larger than the modulus of every complex root.
  const Rational& root_bound() const { return bound_; }

 private:
  int variations_at(const Rational& x) const;
  int variations_at_infinity(bool positive) const;
  std::vector<RatPolynomial> chain_;
  Rational bound_;
};

/// One real root of a square-free polynomial isolated in (lo, hi], or exactly
/// at lo == hi. Endpoints are dyadic.
class IsolatedRoot {
 public:
  IsolatedRoot(const RatPolynomial* square_free, Rational lo, Rational hi);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  bool is_exact() const { return lo_ == hi_; }

  /// Bisects until hi - lo <= 2^-bits.
  void refine(long bits);
  DyadicInterval interval(int precision) const;

 private:
  const RatPolynomial* poly_;
  Rational lo_;
  Rational hi_;
};

/// All real roots of p, isolated and sorted ascending, each of width <= 2^-precision.
/// Throws ZeroPolynomial.
std::vector<DyadicInterval> isolate_real_roots(const RatPolynomial& p, int precision);

/// Isolation kernel shared by the public entry points: returns refinable roots
/// of `square_free` (which must outlive the result), sorted ascending.
std::vector<IsolatedRoot> isolate_roots(const RatPolynomial& square_free, const SturmChain& chain);

}  // namespace affgrass::exact
