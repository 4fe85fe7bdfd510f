#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace sml {

struct DivisionByZeroInterval : std::runtime_error {
  DivisionByZeroInterval()
      : std::runtime_error("interval division by an interval containing zero") {}
};

namespace rnd {

// Directed-rounding kernel.
//
// Containment contract: every endpoint this library produces goes through
// prev()/next() applied to a round-to-nearest result.  IEEE-754 guarantees
// |fl(x op y) - (x op y)| <= 1/2 ulp(fl(x op y)) for op in {+,-,*,/} and
// sqrt, so stepping one ulp outward always brackets the exact value:
//
//     prev(fl(x op y)) <= x op y <= next(fl(x op y)).
//
// Overflow stays contained: when fl() rounds to +inf the exact value exceeds
// the largest finite double, so prev(+inf) = DBL_MAX is a valid lower
// endpoint (mirrored at -inf).  No floating-point environment state is read
// or written; both functions are pure, so every interval operation may run
// concurrently on any thread.

inline double next(double x) noexcept {
  if (x != x || x == std::numeric_limits<double>::infinity()) return x;
  if (x == 0.0) return std::numeric_limits<double>::denorm_min();
  auto b = std::bit_cast<std::uint64_t>(x);
  if (b >> 63) {
    --b;
  } else {
    ++b;
  }
  return std::bit_cast<double>(b);
}

inline double prev(double x) noexcept { return -next(-x); }

// Lower endpoint for a product/quotient whose candidate minimum mn is the
// smallest of the four rounded values p[0..3].  A zero minimum needs the
// operand signs: fl rounds a tiny negative result to -0.0 (underflow), so a
// plain prev(+0.0) would lose containment if min() happened to pick the
// +0.0 representative.  Exactly-zero results keep the endpoint at 0.
inline double round_down_zero_aware(double mn, const double p[4]) noexcept {
  if (mn != 0.0) return prev(mn);
  for (int i = 0; i < 4; ++i)
    if (p[i] == 0.0 && std::signbit(p[i]))
      return -std::numeric_limits<double>::denorm_min();
  return 0.0;
}

inline double round_up_zero_aware(double mx, const double p[4]) noexcept {
  if (mx != 0.0) return next(mx);
  for (int i = 0; i < 4; ++i)
    if (p[i] == 0.0 && !std::signbit(p[i])) return std::numeric_limits<double>::denorm_min();
  return 0.0;
}

}  // namespace rnd

class Interval {
 public:
  Interval() = default;
  explicit Interval(double v) : lo_(v), hi_(v) { check(); }
  Interval(double lo, double hi) : lo_(lo), hi_(hi) { check(); }

  // Enclosure of a value known only up to the nearest double, e.g. a decimal
  // literal that is not exactly representable.
  static Interval around(double v) { return Interval(rnd::prev(v), rnd::next(v)); }

  static Interval hull(const Interval& a, const Interval& b) {
    return Interval(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  double mid() const {
    double m = 0.5 * (lo_ + hi_);
    if (!std::isfinite(m)) m = 0.5 * lo_ + 0.5 * hi_;
    return std::clamp(m, lo_, hi_);
  }

  // Upper bound on the diameter.
  double width_up() const { return rnd::next(hi_ - lo_); }

  // Upper bound on max_{x in this} |x|.
  double mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }

  // Lower bound on min_{x in this} |x|.
  double mig() const {
    if (lo_ <= 0.0 && hi_ >= 0.0) return 0.0;
    return std::min(std::fabs(lo_), std::fabs(hi_));
  }

  bool contains(double v) const { return lo_ <= v && v <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool subset_of(const Interval& o) const { return o.contains(*this); }
  bool contains_zero() const { return lo_ <= 0.0 && hi_ >= 0.0; }
  bool strictly_positive() const { return lo_ > 0.0; }
  bool strictly_negative() const { return hi_ < 0.0; }
  bool intersects(const Interval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

  bool operator==(const Interval& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }

  Interval operator-() const { return Interval(-hi_, -lo_); }  // exact

  Interval operator+(const Interval& o) const {
    if (lo_ == 0.0 && hi_ == 0.0) return o;  // exact
    if (o.lo_ == 0.0 && o.hi_ == 0.0) return *this;
    // additions never underflow: fl(a+b) == 0 implies the exact sum is 0
    const double slo = lo_ + o.lo_;
    const double shi = hi_ + o.hi_;
    return Interval(slo == 0.0 ? 0.0 : rnd::prev(slo), shi == 0.0 ? 0.0 : rnd::next(shi));
  }
  Interval operator-(const Interval& o) const {
    if (o.lo_ == 0.0 && o.hi_ == 0.0) return *this;
    if (lo_ == 0.0 && hi_ == 0.0) return -o;
    const double slo = lo_ - o.hi_;
    const double shi = hi_ - o.lo_;
    return Interval(slo == 0.0 ? 0.0 : rnd::prev(slo), shi == 0.0 ? 0.0 : rnd::next(shi));
  }
  Interval operator*(const Interval& o) const {
    if (lo_ == 0.0 && hi_ == 0.0) return *this;  // exact zero
    if (o.lo_ == 0.0 && o.hi_ == 0.0) return o;
    if (lo_ == 1.0 && hi_ == 1.0) return o;  // exact unit
    if (o.lo_ == 1.0 && o.hi_ == 1.0) return *this;
    const double p[4] = {lo_ * o.lo_, lo_ * o.hi_, hi_ * o.lo_, hi_ * o.hi_};
    double mn = p[0], mx = p[0];
    bool nan = p[0] != p[0];
    for (int i = 1; i < 4; ++i) {
      nan = nan || p[i] != p[i];
      mn = std::min(mn, p[i]);
      mx = std::max(mx, p[i]);
    }
    if (nan) {  // 0 * inf
      return Interval(-std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity());
    }
    return Interval(rnd::round_down_zero_aware(mn, p), rnd::round_up_zero_aware(mx, p));
  }
  Interval operator/(const Interval& o) const {
    if (o.contains_zero()) throw DivisionByZeroInterval();
    if (lo_ == 0.0 && hi_ == 0.0) return *this;
    if (o.lo_ == 1.0 && o.hi_ == 1.0) return *this;
    const double p[4] = {lo_ / o.lo_, lo_ / o.hi_, hi_ / o.lo_, hi_ / o.hi_};
    double mn = p[0], mx = p[0];
    for (int i = 1; i < 4; ++i) {
      mn = std::min(mn, p[i]);
      mx = std::max(mx, p[i]);
    }
    return Interval(rnd::round_down_zero_aware(mn, p), rnd::round_up_zero_aware(mx, p));
  }

  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }
  Interval& operator*=(const Interval& o) { return *this = *this * o; }
  Interval& operator/=(const Interval& o) { return *this = *this / o; }

 private:
  void check() const {
    if (!(lo_ <= hi_))  // also rejects NaN endpoints
      throw std::invalid_argument("invalid interval: lo > hi or NaN endpoint");
  }

  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
inline Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
inline Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
inline Interval operator/(double a, const Interval& b) { return Interval(a) / b; }
inline Interval operator+(const Interval& a, double b) { return a + Interval(b); }
inline Interval operator-(const Interval& a, double b) { return a - Interval(b); }
inline Interval operator*(const Interval& a, double b) { return a * Interval(b); }
inline Interval operator/(const Interval& a, double b) { return a / Interval(b); }

// Tighter than x*x for intervals straddling zero.
inline Interval square(const Interval& x) {
  const double lo = x.mig();
  const double hi = x.mag();
  const double l = (lo == 0.0) ? 0.0 : rnd::prev(lo * lo);
  const double h = (hi == 0.0) ? 0.0 : rnd::next(hi * hi);
  return Interval(std::max(0.0, l), h);
}

inline Interval sqrt(const Interval& x) {
  if (x.lo() < 0.0) throw std::domain_error("interval sqrt of negative interval");
  const double l = (x.lo() == 0.0) ? 0.0 : std::max(0.0, rnd::prev(std::sqrt(x.lo())));
  const double h = (x.hi() == 0.0) ? 0.0 : rnd::next(std::sqrt(x.hi()));
  return Interval(l, h);
}

inline Interval pow_int(const Interval& x, int k) {
  if (k < 0) return Interval(1.0) / pow_int(x, -k);
  Interval acc(1.0);
  Interval base = x;
  while (k > 0) {
    if (k & 1) acc *= base;
    base = square(base);
    k >>= 1;
  }
  return acc;
}

namespace detail {

// Euler's number; the literal parses to the nearest double, widen one ulp.
inline Interval euler_e() { return Interval::around(2.718281828459045235360287); }

// e^r for an exactly representable |r| <= 0.75 via a degree-17 Taylor sum
// with a rigorous Lagrange tail.
inline Interval exp_reduced(double r) {
  const Interval ri(r);
  Interval sum(1.0);
  Interval term(1.0);
  for (int i = 1; i <= 17; ++i) {
    term *= ri / Interval(static_cast<double>(i));
    sum += term;
  }
  // |tail| <= |r|^18/18! * sum_j (|r|/19)^j <= |r|^18/18! / (1 - 0.75/19)
  Interval t = pow_int(Interval(std::fabs(r)), 18);
  for (int i = 2; i <= 18; ++i) t /= Interval(static_cast<double>(i));
  const double tb = (t * Interval(1.042)).hi();
  return sum + Interval(-tb, tb);
}

inline Interval exp_point(double x) {
  if (!(std::fabs(x) <= 708.0))
    throw std::domain_error("interval exp argument out of supported range");
  const double k = std::floor(x + 0.5);
  const double r = x - k;  // exact: k is the integer nearest x (Sterbenz)
  Interval result = exp_reduced(r);
  if (k != 0.0) result *= pow_int(euler_e(), static_cast<int>(k));
  return result;
}

}  // namespace detail

// Rigorous enclosure of e^x on a bounded range; this is the only
// transcendental function the proofs need.
inline Interval exp(const Interval& x) {
  const Interval lo = detail::exp_point(x.lo());
  const Interval hi = detail::exp_point(x.hi());
  return Interval(std::max(0.0, lo.lo()), hi.hi());
}

inline Interval abs(const Interval& x) { return Interval(x.mig(), x.mag()); }

inline Interval intersect(const Interval& a, const Interval& b) {
  if (!a.intersects(b)) throw std::invalid_argument("empty interval intersection");
  return Interval(std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

}  // namespace sml
