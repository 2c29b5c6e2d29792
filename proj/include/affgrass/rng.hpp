#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "affgrass/exact/rational.hpp"

namespace affgrass {

/// Seeded generator whose output is identical across standard libraries:
/// only raw mt19937_64 words are consumed (the std distributions are
/// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Uniform dyadic in [lo, hi] on the 2^-bits grid.
  exact::Rational dyadic(const exact::Rational& lo, const exact::Rational& hi, long bits) {
    const exact::Integer a = exact::ceil(exact::ldexp(lo, bits));
    const exact::Integer b = exact::floor(exact::ldexp(hi, bits));
    const exact::Integer pick = a + exact::Integer(static_cast<unsigned long>(
                                        uniform_int(0, exact::Integer(b - a).get_si())));
    return exact::ldexp(exact::Rational(pick), -bits);
  }

  /// Standard normal rounded to the 2^-bits grid.
  exact::Rational normal_dyadic(long bits) {
    const double x = std::ldexp(normal(), static_cast<int>(bits));
    return exact::ldexp(exact::Rational(exact::Integer(static_cast<long>(std::llround(x)))), -bits);
  }

  /// Independent child stream; used to give each parallel cell its own generator.
  Rng split() { return Rng(next() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace affgrass
