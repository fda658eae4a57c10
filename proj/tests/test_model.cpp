#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "infprod/error.hpp"
#include "infprod/hybrid.hpp"

using namespace infprod;
using namespace fixtures;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(CoordinateSpace, RejectsEmptyAndDuplicateLabels) {
  EXPECT_EQ(kind_of([] { CoordinateSpace({}); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { CoordinateSpace({"a", "a"}); }), ErrorKind::Validation);
  const CoordinateSpace s({"x", "y", "z"});
  EXPECT_EQ(s.symbol("z"), 2u);
  EXPECT_FALSE(s.find("w"));
}

TEST(SpaceFamily, ResolvesHeadThenTemplate) {
  const SpaceFamily fam({CoordinateSpace({"a", "b", "c"})}, CoordinateSpace::binary());
  EXPECT_EQ(fam.at(1).size(), 3u);
  EXPECT_EQ(fam.at(2).size(), 2u);
  EXPECT_EQ(fam.at(1000000).size(), 2u);
}

TEST(CoordinateMeasure, ValidatesWithoutRenormalizing) {
  EXPECT_EQ(kind_of([] { CoordinateMeasure({0.5, 0.4}); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { CoordinateMeasure({1.2, -0.2}); }), ErrorKind::Validation);
  EXPECT_NO_THROW(CoordinateMeasure({0.5, 0.5 + 5e-13}));
  const CoordinateMeasure m({0.0, 1.0});
  EXPECT_EQ(m.dirac_symbol(), Symbol{1});
}

TEST(CoordinateMeasure, DrawSkipsZeroWeights) {
  const CoordinateMeasure m({0.0, 0.3, 0.0, 0.7});
  for (double u : {0.0, 0.1, 0.29999, 0.3, 0.9, 0.999999}) {
    const Symbol s = m.draw(u);
    EXPECT_TRUE(s == 1 || s == 3) << u;
  }
}

TEST(ResolveCoordinateMeasure, GeometricBernoulliThirdCoordinate) {
  const auto sigma = geometric();
  const CoordinateMeasure m = resolve_coordinate_measure(*sigma, 3);
  EXPECT_EQ(m.weight(1), 0.875);
  EXPECT_EQ(m.weight(0), 0.125);
}

TEST(ResolveCoordinateMeasure, HeadLookupAndConstantTail) {
  const ProductMeasure head_uniform(binary(), {CoordinateMeasure::uniform(2)},
                                    ConstantMeasure{CoordinateMeasure::dirac(2, 0)});
  EXPECT_EQ(resolve_coordinate_measure(head_uniform, 1), CoordinateMeasure::uniform(2));
  EXPECT_EQ(resolve_coordinate_measure(head_uniform, 1000000), CoordinateMeasure::dirac(2, 0));
}

TEST(ResolveCoordinateMeasure, PeriodicTailIsAbsolute) {
  const ProductMeasure sigma(binary(), {},
                             PeriodicMeasures{{CoordinateMeasure::bernoulli(0.1), CoordinateMeasure::bernoulli(0.9)}});
  EXPECT_EQ(sigma.resolve(1).weight(1), 0.1);
  EXPECT_EQ(sigma.resolve(2).weight(1), 0.9);
  EXPECT_EQ(sigma.resolve(7).weight(1), 0.1);
}

TEST(ResolveCoordinateMeasure, EveryCoordinateSumsToOne) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 4;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < n; ++k) labels.push_back(std::to_string(k));
    auto spaces = SpaceFamily::uniform(CoordinateSpace(labels));
    std::vector<CoordinateMeasure> head;
    for (int i = 0; i < trial % 5; ++i) head.emplace_back(random_weights(rng, n));
    const ProductMeasure sigma(spaces, head,
                               PeriodicMeasures{{CoordinateMeasure(random_weights(rng, n)),
                                                 CoordinateMeasure(random_weights(rng, n))}});
    for (Index i = 1; i <= 20; ++i) {
      double total = 0.0;
      const CoordinateMeasure m = sigma.resolve(i);
      for (double w : m.weights()) total += w;
      ASSERT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(ProductMeasure, RejectsMismatchedHead) {
  auto spaces = std::make_shared<const SpaceFamily>(std::vector<CoordinateSpace>{CoordinateSpace({"a", "b", "c"})},
                                                    CoordinateSpace::binary());
  EXPECT_EQ(kind_of([&] { ProductMeasure(spaces, {}, ConstantMeasure{CoordinateMeasure::uniform(2)}); }),
            ErrorKind::Validation);
  EXPECT_EQ(kind_of([&] {
              ProductMeasure(spaces, {CoordinateMeasure::uniform(2)}, ConstantMeasure{CoordinateMeasure::uniform(2)});
            }),
            ErrorKind::Validation);
}

TEST(PointSpec, DescribedLookup) {
  const PointSpec x = point({1, 0}, 1);
  EXPECT_EQ(point_coordinate(x, 2), 0u);
  EXPECT_EQ(point_coordinate(x, 500), 1u);
  const PointSpec y = PointSpec::described(binary(), {}, PeriodicSymbols{{0, 1, 1}});
  EXPECT_EQ(y.prefix(7), (std::vector<Symbol>{0, 1, 1, 0, 1, 1, 0}));
}

TEST(PointSpec, RejectsSymbolsOutsideSpace) {
  EXPECT_EQ(kind_of([] { point({2}, 0); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { PointSpec::described(binary(), {}, ConstantSymbol{5}); }), ErrorKind::Validation);
}

TEST(PointSpec, LazyDegenerateMeasureForcesSymbol) {
  auto sigma = std::make_shared<const ProductMeasure>(ProductMeasure::iid(binary(), CoordinateMeasure::bernoulli(1.0)));
  const PointSpec x = PointSpec::lazy(sigma, 12345);
  for (Index i : {1, 2, 77, 100000}) EXPECT_EQ(x.at(i), 1u);
}

TEST(PointSpec, LazyRealizationIsOrderIndependent) {
  auto sigma = uniform_binary();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PointSpec a = PointSpec::lazy(sigma, seed);
    const PointSpec b = PointSpec::lazy(sigma, seed);
    const Symbol a5 = a.at(5), a2 = a.at(2);
    const Symbol b2 = b.at(2), b5 = b.at(5);
    EXPECT_EQ(a5, b5);
    EXPECT_EQ(a2, b2);
    EXPECT_EQ(a.at(5), a5);
    EXPECT_EQ(a.prefix(40), b.prefix(40));
  }
}

TEST(PointSpec, LazyCacheIsSafeUnderConcurrentReaders) {
  auto sigma = uniform_binary();
  const PointSpec x = PointSpec::lazy(sigma, 99);
  const PointSpec reference = PointSpec::lazy(sigma, 99);
  std::vector<std::vector<Symbol>> seen(4);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (Index i = 300; i >= 1; --i) seen[t].push_back(x.at(i));
    });
  }
  for (auto& t : pool) t.join();
  std::vector<Symbol> expected;
  for (Index i = 300; i >= 1; --i) expected.push_back(reference.at(i));
  for (const auto& s : seen) EXPECT_EQ(s, expected);
}

TEST(PointSpec, LazyFrequenciesFollowTheMeasure) {
  auto sigma = std::make_shared<const ProductMeasure>(ProductMeasure::iid(binary(), CoordinateMeasure::bernoulli(0.3)));
  int ones = 0;
  const int n = 20000;
  for (int s = 0; s < n; ++s) ones += PointSpec::lazy(sigma, static_cast<std::uint64_t>(s)).at(1);
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.3, 0.015);
}

TEST(PointSpec, OverridesOnLazyPoints) {
  auto sigma = uniform_binary();
  const PointSpec x = PointSpec::lazy(sigma, 5);
  const PointSpec y = x.with(3, 1 - x.at(3));
  EXPECT_NE(x.at(3), y.at(3));
  for (Index i : {1, 2, 4, 50}) EXPECT_EQ(x.at(i), y.at(i));
}

TEST(HybridMeasure, SwitchAtBuildsSigmaHeadAndDiracTail) {
  const auto sigma = geometric();
  const HybridMeasure h = HybridMeasure::switch_at(*sigma, all(1), 4);
  EXPECT_EQ(h.switch_index(), 4u);
  EXPECT_TRUE(std::holds_alternative<CoordinateMeasure>(h.at(3)));
  EXPECT_EQ(std::get<Symbol>(h.at(4)), 1u);
  EXPECT_EQ(std::get<Symbol>(h.at(1000)), 1u);
  EXPECT_EQ(HybridMeasure::switch_at(*sigma, all(1), 1).switch_index(), 1u);
}

TEST(HybridMeasure, RejectsMismatchedAssignments) {
  EXPECT_EQ(kind_of([] { HybridMeasure({CoordinateMeasure::uniform(3)}, all(0)); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { HybridMeasure({Symbol{4}}, all(0)); }), ErrorKind::Validation);
}
