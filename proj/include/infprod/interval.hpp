// Closed real intervals with outward-rounded arithmetic.
//
// Every operation computes the round-to-nearest result and then recovers the
// exact rounding error with an error-free transformation (TwoSum for addition,
// FMA for products and quotients). The endpoint is moved one ulp outward only
// when the operation was actually inexact, so exact inputs stay exact: a
// degenerate interval built from dyadic rationals keeps zero width.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace infprod {

namespace rounding {

inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }

// Error of s = fl(a + b), i.e. (a + b) - s exactly.
inline double two_sum_error(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

inline double add_down(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return s;
  return two_sum_error(a, b, s) < 0.0 ? down(s) : s;
}

inline double add_up(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return s;
  return two_sum_error(a, b, s) > 0.0 ? up(s) : s;
}

// Products whose result lands in the subnormal range lose the FMA exactness
// guarantee, so those are widened unconditionally.
inline bool tiny(double p) { return std::fabs(p) < std::numeric_limits<double>::min(); }

inline double mul_down(double a, double b) {
  const double p = a * b;
  if (!std::isfinite(p)) return p;
  if (tiny(p) && a != 0.0 && b != 0.0) return down(p);
  return std::fma(a, b, -p) < 0.0 ? down(p) : p;
}

inline double mul_up(double a, double b) {
  const double p = a * b;
  if (!std::isfinite(p)) return p;
  if (tiny(p) && a != 0.0 && b != 0.0) return up(p);
  return std::fma(a, b, -p) > 0.0 ? up(p) : p;
}

// a / b for b > 0: remainder a - q*b is exact under FMA.
inline double div_down(double a, double b) {
  const double q = a / b;
  if (!std::isfinite(q)) return q;
  if (tiny(q) && a != 0.0) return down(q);
  return std::fma(-q, b, a) < 0.0 ? down(q) : q;
}

inline double div_up(double a, double b) {
  const double q = a / b;
  if (!std::isfinite(q)) return q;
  if (tiny(q) && a != 0.0) return up(q);
  return std::fma(-q, b, a) > 0.0 ? up(q) : q;
}

}  // namespace rounding

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double point) : lo(point), hi(point) {}  // NOLINT: implicit by intent
  constexpr Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {}

  static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

  /// Interval around a value produced by a libm call that is not correctly
  /// rounded (std::pow and friends are accurate to a few ulps).
  static Interval around(double x, int ulps = 4) {
    Interval r{x, x};
    for (int i = 0; i < ulps; ++i) {
      r.lo = rounding::down(r.lo);
      r.hi = rounding::up(r.hi);
    }
    return r;
  }

  double width() const { return rounding::add_up(hi, -lo); }
  double mid() const { return lo + 0.5 * (hi - lo); }
  bool is_point() const { return lo == hi; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

  Interval& operator+=(const Interval& o) {
    lo = rounding::add_down(lo, o.lo);
    hi = rounding::add_up(hi, o.hi);
    return *this;
  }
  Interval& operator-=(const Interval& o) {
    const double nlo = rounding::add_down(lo, -o.hi);
    hi = rounding::add_up(hi, -o.lo);
    lo = nlo;
    return *this;
  }
  Interval& operator*=(const Interval& o);

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval operator+(Interval a, const Interval& b) { return a += b; }
inline Interval operator-(Interval a, const Interval& b) { return a -= b; }
inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval operator*(const Interval& a, const Interval& b) {
  using namespace rounding;
  if (a.lo >= 0.0 && b.lo >= 0.0) return {mul_down(a.lo, b.lo), mul_up(a.hi, b.hi)};
  const double lows[] = {mul_down(a.lo, b.lo), mul_down(a.lo, b.hi), mul_down(a.hi, b.lo),
                         mul_down(a.hi, b.hi)};
  const double highs[] = {mul_up(a.lo, b.lo), mul_up(a.lo, b.hi), mul_up(a.hi, b.lo),
                          mul_up(a.hi, b.hi)};
  return {*std::min_element(std::begin(lows), std::end(lows)),
          *std::max_element(std::begin(highs), std::end(highs))};
}

inline Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }

/// Division by an interval that lies strictly above zero.
inline Interval operator/(const Interval& a, const Interval& b) {
  using namespace rounding;
  const double lows[] = {div_down(a.lo, b.lo), div_down(a.lo, b.hi), div_down(a.hi, b.lo),
                         div_down(a.hi, b.hi)};
  const double highs[] = {div_up(a.lo, b.lo), div_up(a.lo, b.hi), div_up(a.hi, b.lo),
                          div_up(a.hi, b.hi)};
  return {*std::min_element(std::begin(lows), std::end(lows)),
          *std::max_element(std::begin(highs), std::end(highs))};
}

/// Smallest interval containing both.
inline Interval join(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

/// Integer power by repeated squaring, outward rounded.
inline Interval pow(Interval base, unsigned long long exponent) {
  Interval result{1.0};
  while (exponent > 0) {
    if (exponent & 1ULL) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

inline std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo << ", " << x.hi << ']';
}

}  // namespace infprod
