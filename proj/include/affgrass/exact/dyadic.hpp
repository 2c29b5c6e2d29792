#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "affgrass/exact/rational.hpp"

namespace affgrass::exact {

/// mantissa * 2^-exponent with exponent >= 0. Canonical form: the mantissa
/// is odd, or the exponent is zero.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(Integer mantissa, long exponent);
  explicit Dyadic(long value) : Dyadic(Integer(value), 0) {}

  /// Throws PreconditionViolation when q's denominator is not a power of two.
  static Dyadic from_rational(const Rational& q);
  /// Largest multiple of 2^-bits that is <= q.
  static Dyadic floor_at(const Rational& q, long bits);
  /// Smallest multiple of 2^-bits that is >= q.
  static Dyadic ceil_at(const Rational& q, long bits);

  const Integer& mantissa() const { return mantissa_; }
  long exponent() const { return exponent_; }

  Rational to_rational() const;
  double to_double() const;

  /// "m*2^-e"
  std::string to_string() const;
  static Dyadic parse(std::string_view text);

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    return compare(a.to_rational(), b.to_rational());
  }

 private:
  void normalize();
  Integer mantissa_ = 0;
  long exponent_ = 0;
};

/// Certified enclosure [lo, hi] of a real number. `precision` is the p the
/// enclosure was requested at; certified operations return hi - lo <= 2^-p.
struct DyadicInterval {
  Dyadic lo;
  Dyadic hi;
  int precision = 0;

  static DyadicInterval point(const Dyadic& x, int precision) { return {x, x, precision}; }

  Rational lo_q() const { return lo.to_rational(); }
  Rational hi_q() const { return hi.to_rational(); }
  Rational width() const { return hi_q() - lo_q(); }
  Rational midpoint() const { return (lo_q() + hi_q()) / 2; }
  double mid_double() const;
  bool is_point() const { return lo == hi; }

  bool contains(const Rational& x) const { return lo_q() <= x && x <= hi_q(); }
  bool overlaps(const DyadicInterval& other) const {
    return lo_q() <= other.hi_q() && other.lo_q() <= hi_q();
  }
  /// hi - lo <= 2^-precision
  bool meets_precision() const;

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

/// Interval sum; the result carries the smaller of the two precisions minus one
/// (the width bound that the sum is guaranteed to satisfy).
DyadicInterval add(const DyadicInterval& a, const DyadicInterval& b);

/// Smallest dyadic interval with endpoints on the 2^-bits grid containing [lo, hi].
DyadicInterval round_outward(const Rational& lo, const Rational& hi, long bits, int precision);

/// Rational bounds [lower, upper] on sqrt(x) with upper - lower <= 2^-bits.
/// Exact (lower == upper) when x is the square of a multiple of 2^-bits.
std::pair<Rational, Rational> sqrt_bounds(const Rational& x, long bits);

/// Certified enclosure of sqrt(x), x >= 0, of width <= 2^-precision.
DyadicInterval enclose_sqrt(const Rational& x, int precision);

/// Repeatedly calls bounds(q) -> pair<Rational, Rational> (rational lower and
/// upper bounds on one fixed real) with growing working precision q until the
/// outward-rounded dyadic enclosure has width <= 2^-precision.
template <class BoundsAt>
DyadicInterval refine_until(int precision, BoundsAt&& bounds) {
  const long grid = precision + 2;
  const Rational target = ldexp(Rational(1), -(precision + 1));
  for (long q = precision + 4;; q += q / 2 + 4) {
    auto [lo, hi] = bounds(q);
    if (hi - lo <= target) return round_outward(lo, hi, grid, precision);
  }
}

}  // namespace affgrass::exact
