#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "infprod/expectation.hpp"
#include "infprod/function.hpp"
#include "infprod/measure.hpp"
#include "infprod/point.hpp"
#include "infprod/space.hpp"

namespace fixtures {

using namespace infprod;
using Rational = boost::multiprecision::cpp_rational;

inline SpacesPtr binary() { return SpaceFamily::binary(); }

inline std::shared_ptr<const ProductMeasure> uniform_binary() {
  return std::make_shared<const ProductMeasure>(ProductMeasure::iid(binary(), CoordinateMeasure::uniform(2)));
}

// sigma_i({1}) = 1 - 2^{-i}.
inline std::shared_ptr<const ProductMeasure> geometric() {
  return std::make_shared<const ProductMeasure>(binary(), std::vector<CoordinateMeasure>{},
                                                FormulaFamily{geometric_bernoulli()});
}

inline PointSpec all(Symbol s) { return PointSpec::constant(binary(), s); }

inline PointSpec point(std::vector<Symbol> head, Symbol tail) {
  return PointSpec::described(binary(), std::move(head), ConstantSymbol{tail});
}

// prod_{i=1}^{n} (1 - 2^{-i}) exactly.
inline Rational geometric_partial(unsigned n) {
  Rational p = 1;
  for (unsigned i = 1; i <= n; ++i) p *= Rational(1) - Rational(1, boost::multiprecision::cpp_int(1) << i);
  return p;
}

// Exact rational value of a double.
inline Rational exact(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto scaled = static_cast<long long>(std::ldexp(m, 53));
  Rational r(scaled);
  e -= 53;
  const boost::multiprecision::cpp_int two = 1;
  if (e >= 0) return r * Rational(two << e);
  return r / Rational(two << -e);
}

// Random probability vector with some zero weights, summing to one within
// the construction tolerance.
inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n, bool allow_zero = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = (allow_zero && u(rng) < 0.2) ? 0.0 : 0.05 + u(rng);
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    return w;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    w[k] /= total;
    acc += w[k];
  }
  w[n - 1] = std::max(0.0, 1.0 - acc);
  return w;
}

inline std::vector<std::string> digit_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(std::to_string(k));
  return out;
}

struct RandomSetup {
  SpacesPtr spaces;
  std::shared_ptr<const ProductMeasure> sigma;
};

inline RandomSetup random_setup(std::mt19937_64& rng) {
  const std::size_t n = 2 + rng() % 3;
  RandomSetup s;
  s.spaces = SpaceFamily::uniform(CoordinateSpace(digit_labels(n)));
  std::vector<CoordinateMeasure> head;
  const std::size_t head_len = rng() % 5;
  for (std::size_t i = 0; i < head_len; ++i) head.emplace_back(random_weights(rng, n));
  MeasureTail tail = ConstantMeasure{CoordinateMeasure(random_weights(rng, n))};
  if (rng() & 1) {
    PeriodicMeasures p;
    const std::size_t period = 1 + rng() % 3;
    for (std::size_t k = 0; k < period; ++k) p.cycle.emplace_back(random_weights(rng, n));
    tail = std::move(p);
  }
  s.sigma = std::make_shared<const ProductMeasure>(s.spaces, std::move(head), std::move(tail));
  return s;
}

inline PointSpec random_point(std::mt19937_64& rng, const SpacesPtr& spaces) {
  const std::size_t n = spaces->tail().size();
  std::vector<Symbol> head;
  const std::size_t len = rng() % 6;
  for (std::size_t i = 0; i < len; ++i) head.push_back(static_cast<Symbol>(rng() % n));
  if (rng() & 1) return PointSpec::described(spaces, head, ConstantSymbol{static_cast<Symbol>(rng() % n)});
  PeriodicSymbols cycle;
  const std::size_t period = 1 + rng() % 3;
  for (std::size_t k = 0; k < period; ++k) cycle.cycle.push_back(static_cast<Symbol>(rng() % n));
  return PointSpec::described(spaces, head, cycle);
}

}  // namespace fixtures
