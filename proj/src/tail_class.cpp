#include "infprod/tail_class.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "infprod/error.hpp"
#include "infprod/rng.hpp"

namespace infprod {

std::string_view to_string(ClassStatus s) {
  return s == ClassStatus::Z0Certified ? "Z0Certified" : "UndeterminedAtDepth";
}

namespace {

// Resolution is relative to max(1, |f|).
double determined(const Interval& v, double resolution) {
  if (!(v.hi - v.lo <= resolution * std::max(1.0, std::fabs(v.mid())))) {
    throw Error(ErrorKind::Undetermined, "function value is not determined by the realized coordinates");
  }
  return v.mid();
}

std::size_t modification_count(const SpaceFamily& spaces, Index depth, std::size_t cap) {
  std::size_t count = 1;
  for (Index i = 1; i <= depth; ++i) {
    const std::size_t n = spaces.at(i).size();
    if (count > cap / n) return cap + 1;
    count *= n;
  }
  return count;
}

struct Candidate {
  std::vector<std::int64_t> prefix;
  Interval value;
};

HullEstimate make_hull(const PointSpec& x, Index depth, const Candidate& lo, const Candidate& hi,
                       double resolution, bool exhaustive) {
  auto witness = [&](const Candidate& c) {
    std::vector<Symbol> p(c.prefix.begin(), c.prefix.end());
    return x.with_prefix(p);
  };
  HullEstimate h{depth, Interval(determined(lo.value, resolution), determined(hi.value, resolution)),
                 witness(lo), witness(hi), lo.value, hi.value, exhaustive};
  return h;
}

HullEstimate enumerate(const TailFunction& f, const PointSpec& x, Index depth, const HullOptions& opt) {
  const SpaceFamily& spaces = *x.spaces();
  Pattern p;
  p.head.assign(depth, 0);
  p.tail_point = &x;
  p.horizon = opt.horizon;

  Candidate lo{p.head, f.bounds(p)};
  Candidate hi = lo;
  for (;;) {
    // Odometer, last coordinate fastest, so ties keep the lexicographically first witness.
    Index i = depth;
    while (i > 0) {
      if (static_cast<std::size_t>(++p.head[i - 1]) < spaces.at(i).size()) break;
      p.head[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
    const Interval v = f.bounds(p);
    if (v.mid() < lo.value.mid()) lo = {p.head, v};
    if (v.mid() > hi.value.mid()) hi = {p.head, v};
  }
  return make_hull(x, depth, lo, hi, opt.value_resolution, true);
}

// Fixes coordinates 1..depth one at a time, each to the symbol whose
// remaining cylinder has the best bound, then polishes with single-coordinate
// improvements from the resulting witness.
Candidate greedy(const TailFunction& f, const PointSpec& x, Index depth, const HullOptions& opt, bool maximize) {
  const SpaceFamily& spaces = *x.spaces();
  Pattern p;
  p.head.assign(depth, Pattern::kFree);
  p.tail_point = &x;
  p.horizon = opt.horizon;
  auto better = [maximize](double a, double b) { return maximize ? a > b : a < b; };

  for (Index i = 1; i <= depth; ++i) {
    std::int64_t best = 0;
    double best_bound = 0.0;
    for (Symbol s = 0; s < spaces.at(i).size(); ++s) {
      p.head[i - 1] = s;
      const Interval b = f.bounds(p);
      const double key = maximize ? b.hi : b.lo;
      if (s == 0 || better(key, best_bound)) {
        best = s;
        best_bound = key;
      }
    }
    p.head[i - 1] = best;
  }

  Interval value = f.bounds(p);
  for (int pass = 0; pass < 8; ++pass) {
    bool changed = false;
    for (Index i = 1; i <= depth; ++i) {
      const std::int64_t keep = p.head[i - 1];
      for (Symbol s = 0; s < spaces.at(i).size(); ++s) {
        if (s == keep) continue;
        p.head[i - 1] = s;
        const Interval v = f.bounds(p);
        if (better(v.mid(), value.mid())) {
          value = v;
          changed = true;
          break;
        }
        p.head[i - 1] = keep;
      }
    }
    if (!changed) break;
  }
  return {p.head, value};
}

bool agree_beyond(const PointSpec& x, const PointSpec& y, Index n, Index horizon) {
  if (y.is_described()) return compare_from(x, y, n + 1, horizon) == Agreement::Agree;
  if (x.is_described()) return compare_from(y, x, n + 1, horizon) == Agreement::Agree;
  // Two lazy points agree beyond n when they share a stream and their
  // overrides coincide there.
  if (x.measure() != y.measure() || x.seed() != y.seed()) return false;
  const Index last = std::max(x.explicit_length(), y.explicit_length());
  for (Index i = n + 1; i <= last; ++i) {
    if (x.at(i) != y.at(i)) return false;
  }
  return true;
}

bool covers(std::vector<Interval> segments, const Interval& target) {
  std::sort(segments.begin(), segments.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double reach = -std::numeric_limits<double>::infinity();
  double start = reach;
  for (const auto& s : segments) {
    if (s.lo > reach) start = s.lo;
    reach = std::max(reach, s.hi);
    if (start <= target.lo && target.hi <= reach) return true;
  }
  return false;
}

}  // namespace

HullEstimate hull_estimate(const TailFunction& f, const PointSpec& x, Index depth, const HullOptions& opt) {
  if (depth == 0) {
    const Interval v = eval_function(f, x, opt.horizon);
    const double m = determined(v, opt.value_resolution);
    return {0, Interval(m), x, x, v, v, true};
  }
  if (modification_count(*x.spaces(), depth, opt.enumeration_budget) <= opt.enumeration_budget) {
    return enumerate(f, x, depth, opt);
  }
  const Candidate lo = greedy(f, x, depth, opt, false);
  const Candidate hi = greedy(f, x, depth, opt, true);
  return make_hull(x, depth, lo, hi, opt.value_resolution, false);
}

ClassVerdict classify(const TailFunction& f, const PointSpec& x, double r, Index depth, const HullOptions& opt) {
  ClassVerdict v;
  v.depth = depth;
  v.r = r;
  v.hull = hull_estimate(f, x, depth, opt);
  v.status = v.hull.interval.contains(r) ? ClassStatus::Z0Certified : ClassStatus::UndeterminedAtDepth;
  return v;
}

WeakApproxCertificate construct_weak_zero(const TailFunction& f, const PointSpec& x, const PointSpec& y, double r,
                                          std::optional<Index> agreement, const HullOptions& opt) {
  if (!agreement) throw Error(ErrorKind::NotTailEquivalent, "no agreement index supplied");
  const Index n = *agreement;
  if (!agree_beyond(x, y, n, opt.horizon)) {
    throw Error(ErrorKind::NotTailEquivalent, "points differ beyond coordinate " + std::to_string(n));
  }
  auto value = [&](const PointSpec& z) {
    const Interval v = eval_function(f, z, opt.horizon);
    determined(v, opt.value_resolution);
    return v;
  };

  WeakApproxCertificate c;
  c.r = r;
  c.agreement = n;
  std::vector<PointSpec> walk{x};
  c.walk.push_back(value(x));
  for (Index k = 1; k <= n; ++k) {
    walk.push_back(walk.back().with(k, y.at(k)));
    c.walk.push_back(value(walk.back()));
  }
  const double fx = c.walk.front().mid();
  const double fy = c.walk.back().mid();
  if (fx > r || fy < r) {
    throw Error(ErrorKind::NotStraddling, "need f(x) <= r <= f(y)");
  }

  // Consecutive walk points differ in exactly their step coordinate.
  for (Index k = 1; k <= n; ++k) {
    for (Index i = 1; i <= n + 1; ++i) {
      const bool same = walk[k - 1].at(i) == walk[k].at(i);
      if (i != k && !same) throw std::logic_error("walk step changed more than one coordinate");
    }
  }
  std::vector<Interval> steps;
  for (Index k = 1; k <= n; ++k) {
    steps.push_back(Interval::hull(c.walk[k - 1].mid(), c.walk[k].mid()));
  }
  if (n > 0 && !covers(steps, Interval(fx, fy))) throw std::logic_error("walk does not cover [f(x), f(y)]");

  Index k = 1;
  if (n > 0) {
    for (k = 1; k <= n; ++k) {
      if (steps[k - 1].contains(r)) break;
    }
    if (k > n) throw Error(ErrorKind::NotStraddling, "no walk step straddles r");
  }

  const Interval& a = c.walk[k - 1];
  const Interval& b = n > 0 ? c.walk[k] : c.walk[0];
  c.coordinate = k;
  c.base = walk[k - 1];
  c.x_symbol = walk[k - 1].at(k);
  c.y_symbol = n > 0 ? walk[k].at(k) : c.x_symbol;
  c.value_x = a;
  c.value_y = b;
  if (a.mid() == b.mid()) {
    c.alpha = 1.0;
  } else {
    c.alpha = std::clamp((b.mid() - r) / (b.mid() - a.mid()), 0.0, 1.0);
  }
  const std::size_t size = x.spaces()->at(k).size();
  if (c.x_symbol == c.y_symbol || c.alpha == 1.0) {
    c.mixing = CoordinateMeasure::dirac(size, c.x_symbol);
  } else {
    std::vector<double> w(size, 0.0);
    w[c.x_symbol] = c.alpha;
    w[c.y_symbol] = 1.0 - c.alpha;
    c.mixing = CoordinateMeasure(std::move(w));
  }
  c.achieved = Interval(c.alpha) * a + (Interval(1.0) - Interval(c.alpha)) * b;
  return c;
}

Interval certificate_value(const TailFunction& f, const WeakApproxCertificate& c, Index horizon) {
  const Interval vx = eval_function(f, c.base.with(c.coordinate, c.x_symbol), horizon);
  const Interval vy = eval_function(f, c.base.with(c.coordinate, c.y_symbol), horizon);
  const Interval alpha{c.alpha};
  return alpha * vx + (Interval(1.0) - alpha) * vy;
}

HybridMeasure certificate_measure(const WeakApproxCertificate& c) {
  std::vector<Assignment> head;
  for (Index i = 1; i < c.coordinate; ++i) head.emplace_back(c.base.at(i));
  head.emplace_back(c.mixing);
  return HybridMeasure(std::move(head), c.base);
}

bool certificate_holds(const TailFunction& f, const WeakApproxCertificate& c, double tolerance, Index horizon) {
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) return false;
  // The mixing measure charges only the two walk symbols at coordinate k.
  for (Symbol s = 0; s < c.mixing.size(); ++s) {
    if (c.mixing.weight(s) > 0.0 && s != c.x_symbol && s != c.y_symbol) return false;
  }
  const Interval v = certificate_value(f, c, horizon);
  return std::max(std::fabs(v.lo - c.r), std::fabs(v.hi - c.r)) <= tolerance;
}

WeakSampleResult weak_zero_from_sample(const TailFunction& f, const std::shared_ptr<const ProductMeasure>& sigma,
                                       const WeakSampleOptions& opt) {
  if (opt.depth == 0) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
  const double r = opt.r ? *opt.r : expect(f, *sigma, opt.engine).interval.mid();
  for (std::size_t attempt = 0; attempt < opt.retries; ++attempt) {
    const std::uint64_t sub = rng::substream(opt.seed, attempt);
    const ClosedPoint cp = close_for(f, *sigma, PointSpec::lazy(sigma, sub), opt.policy);
    if (!cp.closed) continue;
    ClassVerdict v;
    try {
      v = classify(f, cp.point, r, opt.depth, opt.hull);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Undetermined) continue;
      throw;
    }
    if (v.status != ClassStatus::Z0Certified) continue;
    WeakSampleResult out{construct_weak_zero(f, v.hull.argmin, v.hull.argmax, r, opt.depth, opt.hull),
                         attempt + 1, sub, cp.residual};
    return out;
  }
  throw Error(ErrorKind::StraddleNotFound, "no sample straddled r at depth " + std::to_string(opt.depth) +
                                               " after " + std::to_string(opt.retries) + " samples");
}

}  // namespace infprod
