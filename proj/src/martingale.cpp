#include "infprod/martingale.hpp"

#include <cmath>
#include <limits>

#include "infprod/error.hpp"

namespace infprod {

ClosedPoint close_for(const TailFunction& f, const ProductMeasure& sigma, const PointSpec& x,
                      const TailPolicy& policy) {
  const auto* ind = f.as_indicator();
  if (!ind || x.is_described()) return {x, 0.0, true};

  const PointSpec& targets = ind->targets;
  const Index h = policy.horizon;
  // Explicit coordinates past the horizon, then the measure's closed-form tail.
  const Index last = std::max({h, sigma.head().size(), targets.head().size()});
  double miss = 0.0;
  for (Index i = h + 1; i <= last; ++i) miss += 1.0 - sigma.resolve(i).weight(targets.at(i));
  miss += sigma.tail_miss_mass(last + 1, targets.tail_rule());
  miss = rounding::up(miss);
  if (!(miss <= policy.eta)) return {x, miss, false};
  return {close_point(x, h, targets), miss, true};
}

ExpectationResult g_n(const TailFunction& f, const ProductMeasure& sigma, const PointSpec& x, Index n,
                      const EngineOptions& options) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "g_n is indexed from n = 1");
  return expect(f, HybridMeasure::switch_at(sigma, x, n), options);
}

MartingaleTrace trace(const TailFunction& f, const ProductMeasure& sigma, const PointSpec& x, Index n_max,
                      const EngineOptions& options, const TailPolicy& policy) {
  if (n_max == 0) throw Error(ErrorKind::InvalidArgument, "trace needs N >= 1");
  const ClosedPoint cp = close_for(f, sigma, x, policy);
  MartingaleTrace t;
  t.residual = cp.residual;
  t.reference = expect(f, sigma, options);
  for (Index n = 1; n <= n_max; ++n) {
    const ExpectationResult r = g_n(f, sigma, cp.point, n, options);
    t.entries.push_back({n, r.interval, r.status});
  }
  return t;
}

Closeness certify_close(const Interval& g, const Interval& e, double eps) {
  const double farthest = std::max(rounding::add_up(g.hi, -e.lo), rounding::add_up(e.hi, -g.lo));
  if (farthest <= eps) return Closeness::Satisfied;
  const double nearest = std::max({0.0, rounding::add_down(e.lo, -g.hi), rounding::add_down(g.lo, -e.hi)});
  if (nearest > eps) return Closeness::Violated;
  return Closeness::Undecided;
}

std::string_view to_string(StrongOutcome o) {
  switch (o) {
    case StrongOutcome::Found: return "Found";
    case StrongOutcome::NotFoundUpTo: return "NotFoundUpTo";
    case StrongOutcome::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

StrongApproxResult find_strong_approx(const TailFunction& f, const ProductMeasure& sigma, const PointSpec& x,
                                      double eps, Index n_max, const EngineOptions& options,
                                      const TailPolicy& policy) {
  if (!(eps >= 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be >= 0");
  if (n_max == 0) throw Error(ErrorKind::InvalidArgument, "N_max must be >= 1");
  if (eps > 0.0 && !(options.tol < eps / 4.0)) {
    throw Error(ErrorKind::InvalidTolerance, "engine tolerance must be below epsilon / 4");
  }

  StrongApproxResult res;
  res.epsilon = eps;
  res.n_max = n_max;
  const ClosedPoint cp = close_for(f, sigma, x, policy);
  res.residual = cp.residual;
  res.reference = expect(f, sigma, options).interval;

  if (!cp.closed) {
    // Without a decidable tail every g_n is undecided; say so instead of
    // spending the node budget on each index.
    for (Index n = 1; n <= n_max; ++n) res.inconclusive.push_back(n);
    res.outcome = StrongOutcome::Inconclusive;
    return res;
  }

  for (Index n = 1; n <= n_max; ++n) {
    const Interval g = g_n(f, sigma, cp.point, n, options).interval;
    const Closeness c = certify_close(g, res.reference, eps);
    if (c == Closeness::Satisfied) {
      res.certified_n = n;
      res.value_at_certified = g;
      break;
    }
    if (c == Closeness::Undecided) res.inconclusive.push_back(n);
  }
  if (res.certified_n) {
    res.outcome = res.inconclusive.empty() ? StrongOutcome::Found : StrongOutcome::Inconclusive;
  } else {
    res.outcome = res.inconclusive.empty() ? StrongOutcome::NotFoundUpTo : StrongOutcome::Inconclusive;
  }
  return res;
}

}  // namespace infprod
