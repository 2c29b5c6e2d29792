#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace affgrass::exact {

// mpq_class keeps numerator/denominator coprime with a positive denominator
// after every arithmetic operation, which is exactly the invariant we need.
using Rational = mpq_class;
using Integer = mpz_class;
using RatVector = std::vector<Rational>;

/// "num/den" with den > 0, always including the denominator ("3/1").
std::string to_string(const Rational& q);

/// Accepts "n", "n/d" or "-n/d" (decimal). Throws ParseError.
Rational parse_rational(std::string_view text);

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// q * 2^e for any integer e.
Rational ldexp(const Rational& q, long e);

inline std::strong_ordering compare(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater
                        : std::strong_ordering::equal);
}

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

// Vector helpers. All sizes must agree; mismatches throw ShapeMismatch.
Rational dot(const RatVector& a, const RatVector& b);
Rational norm_squared(const RatVector& v);
RatVector add(const RatVector& a, const RatVector& b);
RatVector sub(const RatVector& a, const RatVector& b);
RatVector scale(const Rational& s, const RatVector& v);
bool is_zero(const RatVector& v);

RatVector unit_vector(std::size_t n, std::size_t i);

std::string to_string(const RatVector& v);

}  // namespace affgrass::exact
