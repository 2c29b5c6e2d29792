#include "affgrass/exact/polynomial.hpp"

#include <algorithm>

#include "affgrass/errors.hpp"

namespace affgrass::exact {

RatPolynomial::RatPolynomial(std::vector<Rational> ascending)
    : coeffs_(std::move(ascending)) {
  trim();
}

void RatPolynomial::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

RatPolynomial RatPolynomial::constant(const Rational& c) {
  return RatPolynomial(std::vector<Rational>{c});
}

RatPolynomial RatPolynomial::monomial(const Rational& c, std::size_t degree) {
  std::vector<Rational> v(degree + 1, Rational(0));
  v[degree] = c;
  return RatPolynomial(std::move(v));
}

RatPolynomial RatPolynomial::linear_factor(const Rational& root) {
  return RatPolynomial(std::vector<Rational>{-root, Rational(1)});
}

Rational RatPolynomial::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : Rational(0);
}

const Rational& RatPolynomial::leading() const {
  if (coeffs_.empty()) throw ZeroPolynomial("leading coefficient of zero polynomial");
  return coeffs_.back();
}

Rational RatPolynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

RatPolynomial RatPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    d[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
  }
  return RatPolynomial(std::move(d));
}

RatPolynomial RatPolynomial::monic() const {
  if (is_zero()) return {};
  const Rational lead = leading();
  std::vector<Rational> v(coeffs_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeffs_[i] / lead;
  return RatPolynomial(std::move(v));
}

RatPolynomial RatPolynomial::negated() const {
  std::vector<Rational> v(coeffs_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = -coeffs_[i];
  return RatPolynomial(std::move(v));
}

RatPolynomial operator+(const RatPolynomial& a, const RatPolynomial& b) {
  std::vector<Rational> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) + b.coeff(i);
  return RatPolynomial(std::move(v));
}

RatPolynomial operator-(const RatPolynomial& a, const RatPolynomial& b) {
  std::vector<Rational> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) - b.coeff(i);
  return RatPolynomial(std::move(v));
}

RatPolynomial operator*(const RatPolynomial& a, const RatPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return RatPolynomial(std::move(v));
}

std::pair<RatPolynomial, RatPolynomial> RatPolynomial::divmod(const RatPolynomial& a,
                                                              const RatPolynomial& b) {
  if (b.is_zero()) throw ZeroPolynomial("division by the zero polynomial");
  if (a.degree() < b.degree()) return {RatPolynomial{}, a};
  std::vector<Rational> rem = a.coeffs_;
  std::vector<Rational> quot(a.coeffs_.size() - b.coeffs_.size() + 1, Rational(0));
  const Rational& lead = b.coeffs_.back();
  const std::size_t db = b.coeffs_.size() - 1;
  for (std::size_t k = quot.size(); k-- > 0;) {
    const Rational factor = rem[k + db] / lead;
    quot[k] = factor;
    if (sgn(factor) == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= factor * b.coeffs_[j];
  }
  return {RatPolynomial(std::move(quot)), RatPolynomial(std::move(rem))};
}

std::size_t RatPolynomial::strip_zero_roots() {
  if (is_zero()) throw ZeroPolynomial("cannot strip roots of the zero polynomial");
  std::size_t j = 0;
  while (j < coeffs_.size() && sgn(coeffs_[j]) == 0) ++j;
  coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(j));
  return j;
}

std::string RatPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (sgn(coeffs_[i]) == 0) continue;
    if (!s.empty()) s += " + ";
    s += "(" + exact::to_string(coeffs_[i]) + ")";
    if (i > 0) s += "x^" + std::to_string(i);
  }
  return s;
}

RatPolynomial gcd(const RatPolynomial& a, const RatPolynomial& b) {
  RatPolynomial x = a;
  RatPolynomial y = b;
  while (!y.is_zero()) {
    auto [q, r] = RatPolynomial::divmod(x, y);
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

RatPolynomial square_free_part(const RatPolynomial& p) {
  if (p.is_zero()) throw ZeroPolynomial("square-free part of the zero polynomial");
  if (p.degree() <= 0) return p.monic();
  const RatPolynomial g = gcd(p, p.derivative());
  return RatPolynomial::divmod(p, g).first.monic();
}

std::size_t rational_root_multiplicity(const RatPolynomial& p, const Rational& q) {
  if (p.is_zero()) throw ZeroPolynomial("root multiplicity in the zero polynomial");
  // Repeated synthetic division by (x - q).
  std::size_t mult = 0;
  std::vector<Rational> c = p.coefficients();
  while (c.size() > 1) {
    std::vector<Rational> quot(c.size() - 1);
    Rational carry = 0;
    for (std::size_t i = c.size(); i-- > 1;) {
      carry = carry * q + c[i];
      quot[i - 1] = carry;
    }
    const Rational remainder = carry * q + c[0];
    if (sgn(remainder) != 0) break;
    ++mult;
    c = std::move(quot);
  }
  return mult;
}

}  // namespace affgrass::exact
