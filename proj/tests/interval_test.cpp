#include <doctest.h>

#include <cmath>
#include <random>

#include "smlorenz/interval.hpp"
#include "smlorenz/linalg.hpp"

using namespace sml;

namespace {

constexpr double kUlp = 2.220446049250313e-16;

std::mt19937_64 rng(20240517);

double random_value() {
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-20, 20);
  return std::ldexp(mant(rng), expo(rng));
}

Interval random_interval() {
  const double a = random_value();
  std::uniform_real_distribution<double> w(0.0, 0.5);
  const double half = w(rng) * std::fabs(a) + std::ldexp(w(rng), -30);
  return Interval(a - half, a + half);
}

long double sample_inside(const Interval& x) {
  std::uniform_real_distribution<double> t(0.0, 1.0);
  const long double s = t(rng);
  return (1.0L - s) * static_cast<long double>(x.lo()) + s * static_cast<long double>(x.hi());
}

}  // namespace

TEST_CASE("exact integer addition stays within two ulp") {
  const Interval s = Interval(1.0) + Interval(2.0);
  CHECK(s.contains(3.0));
  CHECK(s.width_up() <= 2.0 * 4.0 * kUlp);
}

TEST_CASE("product hull of [0,1] x [-1,1]") {
  const Interval p = Interval(0.0, 1.0) * Interval(-1.0, 1.0);
  CHECK(p.contains(Interval(-1.0, 1.0)));
  CHECK(p.lo() >= -1.0 - 4.0 * kUlp);
  CHECK(p.hi() <= 1.0 + 4.0 * kUlp);
}

TEST_CASE("0.1 + 0.2 strictly encloses the exact sum") {
  const Interval s = Interval(0.1) + Interval(0.2);
  const long double exact = static_cast<long double>(0.1) + static_cast<long double>(0.2);
  CHECK(static_cast<long double>(s.lo()) < exact);
  CHECK(exact < static_cast<long double>(s.hi()));
  // the real number 0.3 lies strictly inside as well
  CHECK(static_cast<long double>(s.lo()) < 0.3L);
  CHECK(0.3L < static_cast<long double>(s.hi()));
}

TEST_CASE("division by an interval containing zero throws") {
  CHECK_THROWS_AS(Interval(1.0) / Interval(-1.0, 1.0), DivisionByZeroInterval);
  CHECK_THROWS_AS(Interval(1.0) / Interval(0.0), DivisionByZeroInterval);
  CHECK_THROWS_AS(Interval(1.0) / Interval(0.0, 2.0), DivisionByZeroInterval);
}

TEST_CASE("invalid construction throws") {
  CHECK_THROWS_AS(Interval(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Interval(std::nan("")), std::invalid_argument);
}

TEST_CASE("randomized containment against the extended-precision oracle") {
  for (int it = 0; it < 200000; ++it) {
    const Interval a = random_interval();
    Interval b = random_interval();
    const int op = static_cast<int>(rng() % 4);
    if (op == 3 && b.contains_zero()) b = b + Interval(b.mag() + 1.0);
    Interval r(0.0);
    switch (op) {
      case 0: r = a + b; break;
      case 1: r = a - b; break;
      case 2: r = a * b; break;
      default: r = a / b; break;
    }
    const long double x = sample_inside(a);
    const long double y = sample_inside(b);
    long double e = 0.0L;
    switch (op) {
      case 0: e = x + y; break;
      case 1: e = x - y; break;
      case 2: e = x * y; break;
      default: e = x / y; break;
    }
    REQUIRE(static_cast<long double>(r.lo()) <= e);
    REQUIRE(e <= static_cast<long double>(r.hi()));
  }
}

TEST_CASE("inclusion monotonicity of the arithmetic") {
  for (int it = 0; it < 20000; ++it) {
    const Interval a = random_interval();
    Interval b = random_interval();
    const Interval a2(a.lo() - 0.25 * std::fabs(a.lo()) - 1e-12,
                      a.hi() + 0.25 * std::fabs(a.hi()) + 1e-12);
    const Interval b2(b.lo() - 0.25 * std::fabs(b.lo()) - 1e-12,
                      b.hi() + 0.25 * std::fabs(b.hi()) + 1e-12);
    REQUIRE((a2 + b2).contains(a + b));
    REQUIRE((a2 - b2).contains(a - b));
    REQUIRE((a2 * b2).contains(a * b));
    if (!b2.contains_zero()) REQUIRE((a2 / b2).contains(a / b));
  }
}

TEST_CASE("negation is exact, square is tight around zero") {
  const Interval x(-2.0, 3.0);
  CHECK((-x) == Interval(-3.0, 2.0));
  const Interval s = square(x);
  CHECK(s.lo() == 0.0);
  CHECK(s.contains(9.0));
  CHECK(s.hi() <= 9.0 * (1.0 + 4.0 * kUlp));
}

TEST_CASE("sqrt containment and edge cases") {
  CHECK(sqrt(Interval(0.0)) == Interval(0.0));
  CHECK(sqrt(Interval(4.0)).contains(2.0));
  CHECK(sqrt(Interval(4.0)).width_up() <= 4.0 * kUlp);
  CHECK_THROWS_AS(sqrt(Interval(-1.0, 1.0)), std::domain_error);
  for (int it = 0; it < 20000; ++it) {
    Interval a = random_interval();
    a = Interval(std::fabs(a.lo()), std::max(std::fabs(a.lo()), std::fabs(a.hi())));
    const long double x = sample_inside(a);
    const Interval r = sqrt(a);
    REQUIRE(static_cast<long double>(r.lo()) <= sqrtl(x));
    REQUIRE(sqrtl(x) <= static_cast<long double>(r.hi()));
  }
}

TEST_CASE("exp containment on a bounded range") {
  for (int it = 0; it < 5000; ++it) {
    std::uniform_real_distribution<double> u(-60.0, 60.0);
    const double xlo = u(rng);
    const double xhi = xlo + std::fabs(u(rng)) * 0.01;
    const Interval r = exp(Interval(xlo, xhi));
    const long double m = expl((static_cast<long double>(xlo) + xhi) / 2.0L);
    REQUIRE(static_cast<long double>(r.lo()) <= m);
    REQUIRE(m <= static_cast<long double>(r.hi()));
  }
  const Interval e1 = exp(Interval(-1.0));
  CHECK(e1.contains(0.36787944117144233));
  CHECK(e1.width_up() <= 1e-15);
}

TEST_CASE("euclidean norm of interval vectors") {
  const Interval five = euclid_norm_sup(ivec(Interval(3.0), Interval(4.0), Interval(0.0)));
  CHECK(five.contains(5.0));
  CHECK(five.width_up() <= 16.0 * kUlp);

  const Interval zero = euclid_norm_sup(ivec(Interval(0.0), Interval(0.0), Interval(0.0)));
  CHECK(zero == Interval(0.0));

  // hull over corner sampling plus zero
  const Interval c(-1.0, 1.0);
  const Interval n = euclid_norm_sup(ivec(c, c, c));
  CHECK(n.lo() == 0.0);
  const double s3 = 1.7320508075688772;
  CHECK(n.hi() >= s3);
  CHECK(n.hi() <= s3 * (1.0 + 1e-12));
}

TEST_CASE("norm containment for random boxes") {
  for (int it = 0; it < 20000; ++it) {
    const IVec v = ivec(random_interval(), random_interval(), random_interval());
    const Interval n = euclid_norm_sup(v);
    long double s = 0.0L;
    for (const auto& c : v) {
      const long double x = sample_inside(c);
      s += x * x;
    }
    const long double e = sqrtl(s);
    REQUIRE(static_cast<long double>(n.lo()) <= e);
    REQUIRE(e <= static_cast<long double>(n.hi()));
  }
}

TEST_CASE("hull, intersect, predicates") {
  const Interval a(0.0, 1.0), b(0.5, 2.0);
  CHECK(Interval::hull(a, b) == Interval(0.0, 2.0));
  CHECK(intersect(a, b) == Interval(0.5, 1.0));
  CHECK(a.intersects(b));
  CHECK(!a.contains(b));
  CHECK(Interval(0.5, 0.75).subset_of(a));
  CHECK(Interval(-1.0, -0.25).strictly_negative());
  CHECK(Interval(0.25, 3.0).strictly_positive());
  CHECK(Interval(1.0, 3.0).mig() == 1.0);
  CHECK(Interval(-4.0, 3.0).mig() == 0.0);
  CHECK(Interval(-4.0, 3.0).mag() == 4.0);
}
