#include "affgrass/exact/roots.hpp"

#include <algorithm>
#include <utility>

#include "affgrass/errors.hpp"

namespace affgrass::exact {

namespace {

int count_variations(const std::vector<int>& signs) {
  int variations = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

/// Power of two strictly above the Cauchy bound 1 + max |a_i / a_n|.
Rational cauchy_power_of_two(const RatPolynomial& p) {
  Rational m = 0;
  const auto& c = p.coefficients();
  const Rational lead = abs(c.back());
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const Rational r = abs(c[i]) / lead;
    if (r > m) m = r;
  }
  const Rational bound = 1 + m;
  Rational b = 1;
  while (b <= bound) b *= 2;
  return b;
}

}  // namespace

SturmChain::SturmChain(const RatPolynomial& p) {
  if (p.is_zero()) throw ZeroPolynomial("Sturm chain of the zero polynomial");
  chain_.push_back(square_free_part(p));
  bound_ = cauchy_power_of_two(chain_.front());
  if (chain_.front().degree() == 0) return;
  chain_.push_back(chain_.front().derivative());
  while (chain_.back().degree() > 0) {
    auto rem = RatPolynomial::divmod(chain_[chain_.size() - 2], chain_.back()).second;
    if (rem.is_zero()) break;
    chain_.push_back(rem.negated());
  }
}

int SturmChain::variations_at(const Rational& x) const {
  std::vector<int> signs;
  signs.reserve(chain_.size());
  for (const auto& q : chain_) signs.push_back(q.sign_at(x));
  return count_variations(signs);
}

int SturmChain::variations_at_infinity(bool positive) const {
  std::vector<int> signs;
  signs.reserve(chain_.size());
  for (const auto& q : chain_) {
    int s = sgn(q.leading());
    if (!positive && q.degree() % 2 == 1) s = -s;
    signs.push_back(s);
  }
  return count_variations(signs);
}

std::size_t SturmChain::count_in(const Rational& a, const Rational& b) const {
  if (!(a < b)) throw PreconditionViolation("Sturm count needs a < b");
  // V is right-continuous and drops by one at each root, so V(a) - V(b)
  // counts the roots in (a, b] even when a or b is itself a root.
  return static_cast<std::size_t>(variations_at(a) - variations_at(b));
}

std::size_t SturmChain::count_total() const {
  return static_cast<std::size_t>(variations_at_infinity(false) - variations_at_infinity(true));
}

std::size_t SturmChain::count_at_least(const Rational& c) const {
  const std::size_t above = static_cast<std::size_t>(variations_at(c) - variations_at_infinity(true));
  return above + (base().sign_at(c) == 0 ? 1 : 0);
}

std::size_t SturmChain::count_below(const Rational& c) const {
  return count_total() - count_at_least(c);
}

IsolatedRoot::IsolatedRoot(const RatPolynomial* square_free, Rational lo, Rational hi)
    : poly_(square_free), lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ != hi_ && poly_->sign_at(hi_) == 0) lo_ = hi_;
}

void IsolatedRoot::refine(long bits) {
  const Rational target = ldexp(Rational(1), -bits);
  if (is_exact()) return;
  const int sign_hi = poly_->sign_at(hi_);
  while (hi_ - lo_ > target) {
    Rational mid = (lo_ + hi_) / 2;
    const int s = poly_->sign_at(mid);
    if (s == 0) {
      lo_ = hi_ = mid;
      return;
    }
    if (s == sign_hi) {
      hi_ = std::move(mid);
    } else {
      lo_ = std::move(mid);
    }
  }
}

DyadicInterval IsolatedRoot::interval(int precision) const {
  return {Dyadic::from_rational(lo_), Dyadic::from_rational(hi_), precision};
}

std::vector<IsolatedRoot> isolate_roots(const RatPolynomial& square_free, const SturmChain& chain) {
  std::vector<IsolatedRoot> out;
  if (square_free.degree() <= 0) return out;
  const Rational b = chain.root_bound();
  std::vector<std::pair<Rational, Rational>> stack{{-b, b}};
  while (!stack.empty()) {
    auto [lo, hi] = std::move(stack.back());
    stack.pop_back();
    const std::size_t c = chain.count_in(lo, hi);
    if (c == 0) continue;
    if (c == 1) {
      out.emplace_back(&square_free, lo, hi);
      continue;
    }
    Rational mid = (lo + hi) / 2;
    stack.emplace_back(mid, hi);
    stack.emplace_back(lo, std::move(mid));
  }
  std::sort(out.begin(), out.end(),
            [](const IsolatedRoot& x, const IsolatedRoot& y) { return x.hi() < y.hi(); });
  return out;
}

std::vector<DyadicInterval> isolate_real_roots(const RatPolynomial& p, int precision) {
  const SturmChain chain(p);
  auto roots = isolate_roots(chain.base(), chain);
  std::vector<DyadicInterval> out;
  out.reserve(roots.size());
  for (auto& r : roots) {
    r.refine(precision);
    out.push_back(r.interval(precision));
  }
  return out;
}

}  // namespace affgrass::exact
