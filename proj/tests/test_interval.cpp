#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "infprod/interval.hpp"

using namespace infprod;
using fixtures::exact;
using fixtures::Rational;

TEST(Interval, ExactOperationsKeepZeroWidth) {
  const Interval a{0.5}, b{0.25};
  EXPECT_TRUE((a + b).is_point());
  EXPECT_TRUE((a * b).is_point());
  EXPECT_TRUE((a / b).is_point());
  EXPECT_TRUE((a - b).is_point());
  EXPECT_EQ((a * b).lo, 0.125);
}

TEST(Interval, InexactSumEnclosesRationalValue) {
  const Interval s = Interval(0.1) + Interval(0.2);
  EXPECT_FALSE(s.is_point());
  const Rational truth = exact(0.1) + exact(0.2);
  EXPECT_LE(exact(s.lo), truth);
  EXPECT_GE(exact(s.hi), truth);
}

TEST(Interval, RandomProductsAndQuotientsAreEnclosed) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 2000; ++k) {
    const double a = u(rng), b = u(rng), c = std::fabs(u(rng)) + 0.01;
    const Interval p = Interval(a) * Interval(b);
    const Rational tp = exact(a) * exact(b);
    ASSERT_LE(exact(p.lo), tp);
    ASSERT_GE(exact(p.hi), tp);
    const Interval q = Interval(a) / Interval(c);
    const Rational tq = exact(a) / exact(c);
    ASSERT_LE(exact(q.lo), tq);
    ASSERT_GE(exact(q.hi), tq);
    const Interval s = Interval(a) + Interval(b);
    ASSERT_LE(exact(s.lo), exact(a) + exact(b));
    ASSERT_GE(exact(s.hi), exact(a) + exact(b));
  }
}

TEST(Interval, PowerOfHalfIsExact) {
  const Interval p = pow(Interval(0.5), 10);
  EXPECT_TRUE(p.is_point());
  EXPECT_EQ(p.lo, 1.0 / 1024.0);
}

TEST(Interval, WidthRoundsUp) {
  const Interval x{0.1, 0.3};
  EXPECT_GE(exact(x.width()), exact(0.3) - exact(0.1));
}
