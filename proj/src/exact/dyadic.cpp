#include "affgrass/exact/dyadic.hpp"

#include <algorithm>
#include <cmath>

#include "affgrass/errors.hpp"

namespace affgrass::exact {

Dyadic::Dyadic(Integer mantissa, long exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
  normalize();
}

void Dyadic::normalize() {
  if (exponent_ < 0) {
    mantissa_ <<= static_cast<mp_bitcnt_t>(-exponent_);
    exponent_ = 0;
  }
  if (mantissa_ == 0) {
    exponent_ = 0;
    return;
  }
  const auto tz = static_cast<long>(mpz_scan1(mantissa_.get_mpz_t(), 0));
  const long shift = std::min(tz, exponent_);
  if (shift > 0) {
    mantissa_ >>= static_cast<mp_bitcnt_t>(shift);
    exponent_ -= shift;
  }
}

Dyadic Dyadic::from_rational(const Rational& q) {
  const Integer& den = q.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1) {
    throw PreconditionViolation(exact::to_string(q) + " is not dyadic");
  }
  const auto e = static_cast<long>(mpz_scan1(den.get_mpz_t(), 0));
  return Dyadic(q.get_num(), e);
}

Dyadic Dyadic::floor_at(const Rational& q, long bits) {
  return Dyadic(exact::floor(ldexp(q, bits)), bits);
}

Dyadic Dyadic::ceil_at(const Rational& q, long bits) {
  return Dyadic(exact::ceil(ldexp(q, bits)), bits);
}

Rational Dyadic::to_rational() const { return ldexp(Rational(mantissa_), -exponent_); }

double Dyadic::to_double() const {
  return std::ldexp(mantissa_.get_d(), static_cast<int>(-exponent_));
}

std::string Dyadic::to_string() const {
  return mantissa_.get_str() + "*2^-" + std::to_string(exponent_);
}

Dyadic Dyadic::parse(std::string_view text) {
  const auto star = text.find("*2^-");
  if (star == std::string_view::npos) {
    throw ParseError("dyadic '" + std::string(text) + "' is not of the form m*2^-e");
  }
  const Rational m = parse_rational(text.substr(0, star));
  const Rational e = parse_rational(text.substr(star + 4));
  if (m.get_den() != 1 || e.get_den() != 1 || e < 0) {
    throw ParseError("dyadic '" + std::string(text) + "' has non-integer parts");
  }
  return Dyadic(m.get_num(), e.get_num().get_si());
}

double DyadicInterval::mid_double() const { return (lo.to_double() + hi.to_double()) / 2.0; }

bool DyadicInterval::meets_precision() const {
  return width() <= ldexp(Rational(1), -precision);
}

DyadicInterval add(const DyadicInterval& a, const DyadicInterval& b) {
  const Rational lo = a.lo_q() + b.lo_q();
  const Rational hi = a.hi_q() + b.hi_q();
  return {Dyadic::from_rational(lo), Dyadic::from_rational(hi),
          std::min(a.precision, b.precision) - 1};
}

DyadicInterval round_outward(const Rational& lo, const Rational& hi, long bits, int precision) {
  return {Dyadic::floor_at(lo, bits), Dyadic::ceil_at(hi, bits), precision};
}

std::pair<Rational, Rational> sqrt_bounds(const Rational& x, long bits) {
  if (sgn(x) < 0) throw PreconditionViolation("sqrt of negative number " + to_string(x));
  const Rational scaled = ldexp(x, 2 * bits);
  const Integer n = exact::floor(scaled);
  Integer s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  const Rational lower = ldexp(Rational(s), -bits);
  if (s * s == n && scaled == Rational(n)) return {lower, lower};
  return {lower, ldexp(Rational(s + 1), -bits)};
}

DyadicInterval enclose_sqrt(const Rational& x, int precision) {
  auto [lo, hi] = sqrt_bounds(x, precision);
  return {Dyadic::from_rational(lo), Dyadic::from_rational(hi), precision};
}

}  // namespace affgrass::exact
