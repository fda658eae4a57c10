#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "infprod/error.hpp"
#include "infprod/martingale.hpp"

using namespace infprod;
using namespace fixtures;

namespace {

TailFunction indicator() { return TailFunction::product_indicator(all(1)); }
TailFunction discounted() { return TailFunction::discounted_sum(binary(), {{"1", 1.0}}, 1.0, 0.5); }

}  // namespace

TEST(GN, ConstantFunction) {
  const TailFunction f = TailFunction::constant(binary(), 3.0);
  for (Index n = 1; n <= 5; ++n) EXPECT_EQ(g_n(f, *uniform_binary(), all(0), n).interval, Interval(3.0));
}

TEST(GN, FirstIndexIsPointValue) {
  EXPECT_EQ(g_n(indicator(), *geometric(), all(1), 1).interval, Interval(1.0));
  EXPECT_EQ(g_n(indicator(), *geometric(), point({0}, 1), 1).interval, Interval(0.0));
}

TEST(GN, IndicatorSixthIndex) {
  const Interval g = g_n(indicator(), *geometric(), all(1), 6).interval;
  EXPECT_TRUE(g.contains(0.298004150390625));
  EXPECT_NEAR(g.mid(), 0.2980041504, 1e-10);
}

TEST(GN, DiscountedClosedForm) {
  const Interval g3 = g_n(discounted(), *uniform_binary(), all(1), 3).interval;
  EXPECT_TRUE(g3.contains(0.625));
  for (Index n = 1; n <= 12; ++n) {
    const Interval g = g_n(discounted(), *uniform_binary(), all(1), n).interval;
    EXPECT_TRUE(g.overlaps(Interval(0.5 + std::ldexp(1.0, -static_cast<int>(n))))) << n << " " << g;
  }
}

TEST(GN, RejectsIndexZero) {
  EXPECT_THROW(g_n(indicator(), *geometric(), all(1), 0), Error);
}

TEST(Trace, MatchesRationalPartialProducts) {
  const MartingaleTrace t = trace(indicator(), *geometric(), all(1), 20);
  ASSERT_EQ(t.entries.size(), 20u);
  for (const auto& e : t.entries) {
    const Rational truth = geometric_partial(static_cast<unsigned>(e.n - 1));
    EXPECT_LE(exact(e.value.lo), truth) << e.n;
    EXPECT_GE(exact(e.value.hi), truth) << e.n;
    EXPECT_NEAR(e.value.mid(), static_cast<double>(truth), 1e-12);
  }
  EXPECT_TRUE(t.reference.interval.contains(0.2887880951) ||
              std::fabs(t.reference.interval.mid() - 0.2887880951) < 5e-11);
}

TEST(Trace, StrictlyAboveExpectationUpToFifty) {
  const Rational upper_e = geometric_partial(51);
  const MartingaleTrace t = trace(indicator(), *geometric(), all(1), 50);
  for (const auto& e : t.entries) {
    const Rational g = geometric_partial(static_cast<unsigned>(e.n - 1));
    EXPECT_GT(g - upper_e, 0) << e.n;
    EXPECT_LE(exact(e.value.lo), g);
    EXPECT_GE(exact(e.value.hi), g);
  }
}

TEST(Strong, ExampleFindsSix) {
  const StrongApproxResult r = find_strong_approx(indicator(), *geometric(), all(1), 0.01, 60);
  EXPECT_EQ(r.outcome, StrongOutcome::Found);
  ASSERT_TRUE(r.certified_n);
  EXPECT_EQ(*r.certified_n, 6u);
  EXPECT_TRUE(r.inconclusive.empty());
}

TEST(Strong, EpsilonAboveRangeFindsOne) {
  const StrongApproxResult r = find_strong_approx(indicator(), *geometric(), all(0), 1.0, 60);
  EXPECT_EQ(r.outcome, StrongOutcome::Found);
  EXPECT_EQ(r.certified_n, Index{1});
}

TEST(Strong, DiscountedFindsFour) {
  const StrongApproxResult r = find_strong_approx(discounted(), *uniform_binary(), all(1), 0.1, 10);
  EXPECT_EQ(r.outcome, StrongOutcome::Found);
  EXPECT_EQ(r.certified_n, Index{4});
}

TEST(Strong, NotFoundWhenBudgetTooSmall) {
  const StrongApproxResult r = find_strong_approx(indicator(), *geometric(), all(1), 0.01, 5);
  EXPECT_EQ(r.outcome, StrongOutcome::NotFoundUpTo);
  EXPECT_FALSE(r.member());
}

TEST(Strong, RejectsCoarseEngineTolerance) {
  EngineOptions opt;
  opt.tol = 0.005;
  try {
    find_strong_approx(indicator(), *geometric(), all(1), 0.01, 10, opt);
    FAIL() << "expected InvalidTolerance";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidTolerance);
  }
}

TEST(Strong, FoundIndexIsMinimal) {
  std::mt19937_64 rng(17);
  const auto sigma = uniform_binary();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Symbol> head;
    for (int i = 0; i < 6; ++i) head.push_back(static_cast<Symbol>(rng() & 1));
    const PointSpec x = point(head, static_cast<Symbol>(rng() & 1));
    const double eps = 0.02 + 0.2 * (rng() % 100) / 100.0;
    const StrongApproxResult r = find_strong_approx(discounted(), *sigma, x, eps, 20);
    ASSERT_EQ(r.outcome, StrongOutcome::Found);
    for (Index m = 1; m < *r.certified_n; ++m) {
      const Interval g = g_n(discounted(), *sigma, x, m).interval;
      EXPECT_EQ(certify_close(g, r.reference, eps), Closeness::Violated) << m;
    }
    const Interval g = g_n(discounted(), *sigma, x, *r.certified_n).interval;
    EXPECT_EQ(certify_close(g, r.reference, eps), Closeness::Satisfied);
  }
}

TEST(CertifyClose, ThreeWay) {
  EXPECT_EQ(certify_close(Interval(0.5), Interval(0.45), 0.1), Closeness::Satisfied);
  EXPECT_EQ(certify_close(Interval(0.5), Interval(0.3), 0.1), Closeness::Violated);
  EXPECT_EQ(certify_close(Interval(0.5, 0.7), Interval(0.5), 0.1), Closeness::Undecided);
}

TEST(Closure, IndicatorAtLazyPoint) {
  const auto sigma = geometric();
  const PointSpec x = PointSpec::lazy(sigma, 99);
  TailPolicy policy;
  const ClosedPoint cp = close_for(indicator(), *sigma, x, policy);
  EXPECT_TRUE(cp.closed);
  EXPECT_TRUE(cp.point.is_described());
  EXPECT_LE(cp.residual, std::ldexp(1.0, -60) * 1.0000001);
  for (Index i = 1; i <= policy.horizon; ++i) EXPECT_EQ(cp.point.at(i), x.at(i));
  for (Index i = policy.horizon + 1; i <= policy.horizon + 20; ++i) EXPECT_EQ(cp.point.at(i), 1u);
}

TEST(Closure, UniformTailCannotClose) {
  const auto sigma = uniform_binary();
  const ClosedPoint cp = close_for(indicator(), *sigma, PointSpec::lazy(sigma, 3), {});
  EXPECT_FALSE(cp.closed);
}

TEST(Closure, OtherFamiliesPassThrough) {
  const auto sigma = uniform_binary();
  const PointSpec x = PointSpec::lazy(sigma, 5);
  const ClosedPoint cp = close_for(discounted(), *sigma, x, {});
  EXPECT_TRUE(cp.closed);
  EXPECT_EQ(cp.residual, 0.0);
  EXPECT_TRUE(cp.point.is_lazy());
}

// Reverse martingale step and tower property on Cylinder functions.
namespace {

struct CylinderCase {
  SpacesPtr spaces;
  ProductMeasure sigma;
  TailFunction f;
};

std::vector<CylinderCase> cylinder_cases() {
  std::vector<CylinderCase> out;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t k = 2 + trial % 2;
    std::vector<std::string> labels;
    for (std::size_t s = 0; s < k; ++s) labels.push_back(std::to_string(s));
    auto spaces = SpaceFamily::uniform(CoordinateSpace(labels));
    std::vector<CoordinateMeasure> head;
    for (int i = 0; i < 3; ++i) head.emplace_back(random_weights(rng, k, false));
    ProductMeasure sigma(spaces, head, ConstantMeasure{CoordinateMeasure(random_weights(rng, k, false))});
    const std::size_t depth = 3;
    std::vector<double> table(k * k * k);
    for (auto& v : table) v = u(rng);
    out.push_back({spaces, sigma, TailFunction::cylinder(spaces, depth, table)});
  }
  return out;
}

}  // namespace

TEST(MartingaleProperty, ReverseStep) {
  EngineOptions opt;
  opt.tol = 1e-10;
  std::mt19937_64 rng(8);
  for (const auto& c : cylinder_cases()) {
    const std::size_t k = c.spaces->tail().size();
    for (int sample = 0; sample < 4; ++sample) {
      std::vector<Symbol> head;
      for (int i = 0; i < 7; ++i) head.push_back(static_cast<Symbol>(rng() % k));
      const PointSpec x = PointSpec::described(c.spaces, head, ConstantSymbol{0});
      for (Index n = 1; n <= 6; ++n) {
        Interval mixed{0.0};
        const CoordinateMeasure m = c.sigma.resolve(n);
        for (Symbol s = 0; s < k; ++s) mixed += Interval(m.weight(s)) * g_n(c.f, c.sigma, x.with(n, s), n, opt).interval;
        const Interval next = g_n(c.f, c.sigma, x, n + 1, opt).interval;
        EXPECT_NEAR(next.mid(), mixed.mid(), 4 * opt.tol) << n;
      }
    }
  }
}

TEST(MartingaleProperty, Tower) {
  EngineOptions opt;
  opt.tol = 1e-10;
  for (const auto& c : cylinder_cases()) {
    const std::size_t k = c.spaces->tail().size();
    const double e = expect(c.f, c.sigma, opt).interval.mid();
    for (Index n = 1; n <= 4; ++n) {
      // g_n depends on coordinates n..3 only.
      const Index lo = n, hi = std::max<Index>(n, 3);
      std::size_t cells = 1;
      for (Index i = lo; i <= hi; ++i) cells *= k;
      double total = 0.0;
      for (std::size_t cell = 0; cell < cells; ++cell) {
        std::vector<Symbol> head(hi, 0);
        double w = 1.0;
        std::size_t rest = cell;
        for (Index i = lo; i <= hi; ++i) {
          head[i - 1] = static_cast<Symbol>(rest % k);
          rest /= k;
          w *= c.sigma.resolve(i).weight(head[i - 1]);
        }
        const PointSpec x = PointSpec::described(c.spaces, head, ConstantSymbol{0});
        total += w * g_n(c.f, c.sigma, x, n, opt).interval.mid();
      }
      EXPECT_NEAR(total, e, 1e-9) << n;
    }
  }
}
