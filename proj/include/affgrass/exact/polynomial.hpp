#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "affgrass/exact/rational.hpp"

namespace affgrass::exact {

/// Univariate polynomial over Q, coefficients in ascending degree. Trailing
/// zero coefficients are always trimmed, so the zero polynomial has no
/// coefficients and degree -1.
class RatPolynomial {
 public:
  RatPolynomial() = default;
  explicit RatPolynomial(std::vector<Rational> ascending);

  static RatPolynomial constant(const Rational& c);
  static RatPolynomial monomial(const Rational& c, std::size_t degree);
  /// (x - root)
  static RatPolynomial linear_factor(const Rational& root);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coeff(std::size_t i) const;
  const Rational& leading() const;

  Rational operator()(const Rational& x) const;
  int sign_at(const Rational& x) const { return sgn((*this)(x)); }

  RatPolynomial derivative() const;
  RatPolynomial monic() const;
  RatPolynomial negated() const;

  friend RatPolynomial operator+(const RatPolynomial& a, const RatPolynomial& b);
  friend RatPolynomial operator-(const RatPolynomial& a, const RatPolynomial& b);
  friend RatPolynomial operator*(const RatPolynomial& a, const RatPolynomial& b);
  friend bool operator==(const RatPolynomial& a, const RatPolynomial& b) = default;

  /// Euclidean division; throws ZeroPolynomial when dividing by zero.
  static std::pair<RatPolynomial, RatPolynomial> divmod(const RatPolynomial& a,
                                                        const RatPolynomial& b);

  /// Removes the factor x^j for the largest such j; returns j.
  std::size_t strip_zero_roots();

  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Monic gcd; gcd(0, 0) is the zero polynomial.
RatPolynomial gcd(const RatPolynomial& a, const RatPolynomial& b);

/// p / gcd(p, p'), made monic. Same real roots as p, all simple.
RatPolynomial square_free_part(const RatPolynomial& p);

/// Exact multiplicity of q as a root of p (0 when not a root).
/// Throws ZeroPolynomial for p == 0.
std::size_t rational_root_multiplicity(const RatPolynomial& p, const Rational& q);

}  // namespace affgrass::exact
