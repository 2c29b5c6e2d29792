#pragma once

#include <compare>
#include <memory>
#include <utility>
#include <vector>

#include "affgrass/exact/dyadic.hpp"
#include "affgrass/exact/matrix.hpp"
#include "affgrass/exact/roots.hpp"

namespace affgrass::exact {

/// A real algebraic number given as the unique root of a square-free rational
/// polynomial inside an isolating interval. Refinement is in place.
class RealRoot {
 public:
  RealRoot(std::shared_ptr<const RatPolynomial> square_free, IsolatedRoot root)
      : poly_(std::move(square_free)), root_(std::move(root)) {}

  /// Rational bounds [lo, hi] with hi - lo <= 2^-bits.
  std::pair<Rational, Rational> bounds(long bits);
  bool is_exact() const { return root_.is_exact(); }
  const Rational& lo() const { return root_.lo(); }
  const Rational& hi() const { return root_.hi(); }

 private:
  std::shared_ptr<const RatPolynomial> poly_;
  IsolatedRoot root_;
};

/// All distinct real roots of p, ascending. Throws ZeroPolynomial.
std::vector<RealRoot> real_roots(const RatPolynomial& p);

/// Eigenvalues of a symmetric rational matrix, ascending, distinct.
std::vector<RealRoot> symmetric_eigenvalues(const RatMatrix& sym);

struct SigmaEnclosure {
  DyadicInterval sigma;       ///< smallest nonzero singular value
  DyadicInterval eigenvalue;  ///< the matching eigenvalue of a^T a (= sigma^2)
};

/// Smallest nonzero singular value of a: char_poly(a^T a), strip the exact
/// multiplicity of the root 0, enclose the smallest remaining root, take a
/// certified square root. Throws ZeroMatrix when a == 0.
DyadicInterval sigma_min_nonzero(const RatMatrix& a, int precision);
SigmaEnclosure sigma_min_nonzero_detail(const RatMatrix& a, int precision);

/// Refinable smallest nonzero eigenvalue of a^T a.
RealRoot smallest_nonzero_gram_eigenvalue(const RatMatrix& a);

/// Enclosure of |v| with width <= 2^-precision.
DyadicInterval norm_enclosure(const RatVector& v, int precision);

/// Exact comparison of |v| with q >= 0 (compares |v|^2 with q^2).
std::strong_ordering compare_norm(const RatVector& v, const Rational& q);

/// Exact comparison of sqrt(a) + sqrt(b) with c, for rationals a, b >= 0.
std::strong_ordering compare_sqrt_sum(const Rational& a, const Rational& b, const Rational& c);

}  // namespace affgrass::exact
