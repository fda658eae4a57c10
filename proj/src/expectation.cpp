#include "infprod/expectation.hpp"

#include <algorithm>
#include <deque>
#include <queue>

#include "infprod/error.hpp"

namespace infprod {

std::string_view to_string(ExpectStatus s) {
  return s == ExpectStatus::Certified ? "Certified" : "BudgetExhausted";
}

std::string_view to_string(ExpectMethod m) { return m == ExpectMethod::Oracle ? "oracle" : "refinement"; }

namespace {

// What the engine integrates against: a measure per coordinate, with an
// optional switch index past which every coordinate is pinned to a point.
struct Integrand {
  const ProductMeasure* product = nullptr;
  const HybridMeasure* hybrid = nullptr;

  bool has_point_tail() const { return hybrid != nullptr; }
  Index last_free() const { return hybrid ? hybrid->switch_index() - 1 : 0; }

  // (symbol, weight) children of coordinate i.
  void children(Index i, std::vector<std::pair<Symbol, Interval>>& out) const {
    out.clear();
    if (product) {
      const std::size_t n = product->spaces()->at(i).size();
      for (Symbol s = 0; s < n; ++s) {
        const Interval w = product->weight(i, s);
        if (w.hi > 0.0) out.emplace_back(s, w);
      }
      return;
    }
    const Assignment a = hybrid->at(i);
    if (const auto* s = std::get_if<Symbol>(&a)) {
      out.emplace_back(*s, Interval(1.0));
      return;
    }
    const auto& m = std::get<CoordinateMeasure>(a);
    for (Symbol s = 0; s < m.size(); ++s) {
      if (m.weight(s) > 0.0) out.emplace_back(s, Interval(m.weight(s)));
    }
  }

  Pattern pattern(const std::vector<Symbol>& prefix, Index horizon) const {
    Pattern p;
    p.head.assign(prefix.begin(), prefix.end());
    if (!hybrid) return p;
    for (Index i = prefix.size() + 1; i < hybrid->switch_index(); ++i) {
      const auto& a = hybrid->head()[i - 1];
      const auto* s = std::get_if<Symbol>(&a);
      p.head.push_back(s ? static_cast<std::int64_t>(*s) : Pattern::kFree);
    }
    p.tail_point = &hybrid->tail_point();
    p.horizon = horizon;
    return p;
  }
};

struct Node {
  std::vector<Symbol> prefix;
  Interval mass;
  Interval value;
  bool alive = true;

  double score() const { return mass.hi * (value.hi - value.lo); }
};

Interval frontier_sum(const std::deque<Node>& nodes) {
  std::vector<const Node*> live;
  for (const auto& n : nodes) {
    if (n.alive) live.push_back(&n);
  }
  std::sort(live.begin(), live.end(), [](const Node* a, const Node* b) { return a->prefix < b->prefix; });
  Interval total{0.0};
  for (const Node* n : live) total += n->mass * n->value;
  return total;
}

ExpectationResult refine(const TailFunction& f, const Integrand& mu, const EngineOptions& opt) {
  const double target = 2.0 * opt.tol;
  std::deque<Node> nodes;
  auto cmp = [&nodes](std::size_t a, std::size_t b) {
    const double sa = nodes[a].score();
    const double sb = nodes[b].score();
    if (sa != sb) return sa < sb;
    return nodes[a].prefix > nodes[b].prefix;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> open(cmp);

  double running_width = 0.0;
  auto add_node = [&](std::vector<Symbol> prefix, Interval mass) {
    Node n;
    n.prefix = std::move(prefix);
    n.mass = mass;
    n.value = f.bounds(mu.pattern(n.prefix, opt.horizon));
    running_width += n.score();
    const bool terminal =
        n.value.lo == n.value.hi || (mu.has_point_tail() && n.prefix.size() >= mu.last_free());
    nodes.push_back(std::move(n));
    if (!terminal) open.push(nodes.size() - 1);
  };

  add_node({}, Interval(1.0));
  ExpectationResult result;
  result.method = ExpectMethod::Refinement;
  std::vector<std::pair<Symbol, Interval>> kids;

  for (;;) {
    if (running_width <= target * (1.0 + 1e-9)) {
      const Interval total = frontier_sum(nodes);
      if (total.hi - total.lo <= target) {
        result.interval = total;
        result.status = ExpectStatus::Certified;
        return result;
      }
    }
    if (open.empty() || result.nodes_expanded >= opt.node_budget) break;

    const std::size_t idx = open.top();
    open.pop();
    Node& parent = nodes[idx];
    parent.alive = false;
    running_width -= parent.score();
    const Index coordinate = parent.prefix.size() + 1;
    mu.children(coordinate, kids);
    const std::vector<Symbol> base = parent.prefix;
    const Interval mass = parent.mass;
    for (const auto& [s, w] : kids) {
      std::vector<Symbol> child = base;
      child.push_back(s);
      add_node(std::move(child), mass * w);
    }
    ++result.nodes_expanded;
    // Keep the running estimate from drifting below zero through cancellation.
    running_width = std::max(running_width, 0.0);
  }
  result.interval = frontier_sum(nodes);
  result.status = (result.interval.hi - result.interval.lo <= target) ? ExpectStatus::Certified
                                                                       : ExpectStatus::BudgetExhausted;
  return result;
}

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

ExpectationResult run(const TailFunction& f, const Integrand& mu, const std::optional<Interval>& oracle,
                      const EngineOptions& opt) {
  if (!(opt.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (oracle && oracle->hi - oracle->lo <= 2.0 * opt.tol) {
    return {*oracle, 0, ExpectStatus::Certified, ExpectMethod::Oracle};
  }
  ExpectationResult r = refine(f, mu, opt);
  if (oracle) {
    r.interval = intersect(r.interval, *oracle);
    if (r.interval.hi - r.interval.lo <= 2.0 * opt.tol) r.status = ExpectStatus::Certified;
  }
  return r;
}

}  // namespace

ExpectationResult expect(const TailFunction& f, const ProductMeasure& mu, const EngineOptions& opt) {
  Integrand in;
  in.product = &mu;
  return run(f, in, opt.use_oracle ? exact_expectation(f, mu) : std::nullopt, opt);
}

ExpectationResult expect(const TailFunction& f, const HybridMeasure& mu, const EngineOptions& opt) {
  Integrand in;
  in.hybrid = &mu;
  return run(f, in, opt.use_oracle ? exact_expectation(f, mu, opt.horizon) : std::nullopt, opt);
}

// --- closed forms -----------------------------------------------------------

namespace {

std::optional<Interval> indicator_product(const ProductIndicator& ind, const ProductMeasure& mu) {
  const PointSpec& t = ind.targets;
  const Index last = std::max(mu.head().size(), t.head().size());
  Interval acc{1.0};
  for (Index i = 1; i <= last; ++i) acc *= mu.weight(i, t.at(i));
  const auto tail = mu.tail_target_product(last + 1, t.tail_rule());
  if (!tail) return std::nullopt;
  return acc * *tail;
}

std::optional<Interval> indicator_product(const ProductIndicator& ind, const HybridMeasure& mu, Index horizon) {
  const PointSpec& t = ind.targets;
  Interval acc{1.0};
  for (Index i = 1; i < mu.switch_index(); ++i) {
    const auto& a = mu.head()[i - 1];
    if (const auto* s = std::get_if<Symbol>(&a)) {
      if (*s != t.at(i)) return Interval(0.0);
    } else {
      acc *= Interval(std::get<CoordinateMeasure>(a).weight(t.at(i)));
    }
  }
  switch (compare_from(mu.tail_point(), t, mu.switch_index(), horizon)) {
    case Agreement::Agree: return acc;
    case Agreement::Disagree: return Interval(0.0);
    case Agreement::Unknown: break;
  }
  return std::nullopt;
}

Interval mean_score(const CoordinateMeasure& m, const DiscountedSum& d, Index i) {
  const auto& scores = i <= d.head_scores.size() ? d.head_scores[i - 1] : d.tail_scores;
  Interval acc{0.0};
  for (Symbol s = 0; s < m.size(); ++s) acc += Interval(m.weight(s)) * Interval(scores[s]);
  return acc;
}

}  // namespace

std::optional<Interval> exact_expectation(const TailFunction& f, const ProductMeasure& mu) {
  if (const auto* ind = f.as_indicator()) return indicator_product(*ind, mu);
  if (const auto* d = f.as_discounted()) {
    const Interval q{d->ratio};
    Interval w = Interval(d->scale) * q;
    Interval acc{0.0};
    for (Index i = 1; i <= mu.head().size(); ++i) {
      acc += w * mean_score(mu.head()[i - 1], *d, i);
      w *= q;
    }
    const auto tail = mu.tail_discounted_score(mu.head().size() + 1, d->tail_scores, d->scale, d->ratio);
    if (!tail) return std::nullopt;
    return acc + *tail;
  }
  return std::nullopt;
}

std::optional<Interval> exact_expectation(const TailFunction& f, const HybridMeasure& mu, Index horizon) {
  if (const auto* ind = f.as_indicator()) return indicator_product(*ind, mu, horizon);
  if (const auto* d = f.as_discounted()) {
    const Interval q{d->ratio};
    Interval w = Interval(d->scale) * q;
    Interval acc{0.0};
    for (Index i = 1; i < mu.switch_index(); ++i) {
      const auto& a = mu.head()[i - 1];
      if (const auto* s = std::get_if<Symbol>(&a)) {
        const auto& scores = i <= d->head_scores.size() ? d->head_scores[i - 1] : d->tail_scores;
        acc += w * Interval(scores[*s]);
      } else {
        acc += w * mean_score(std::get<CoordinateMeasure>(a), *d, i);
      }
      w *= q;
    }
    return acc + discounted_value_from(f, mu.tail_point(), mu.switch_index(), horizon);
  }
  return std::nullopt;
}

Interval exact_expectation_product_indicator(const TailFunction& f, const ProductMeasure& mu) {
  const auto* ind = f.as_indicator();
  if (!ind) throw Error(ErrorKind::InvalidArgument, "not a product indicator");
  if (auto r = indicator_product(*ind, mu)) return *r;
  throw Error(ErrorKind::UnsupportedTail, "no closed form for this tail rule");
}

Interval exact_expectation_product_indicator(const TailFunction& f, const HybridMeasure& mu) {
  const auto* ind = f.as_indicator();
  if (!ind) throw Error(ErrorKind::InvalidArgument, "not a product indicator");
  if (auto r = indicator_product(*ind, mu, EngineOptions{}.horizon)) return *r;
  throw Error(ErrorKind::UnsupportedTail, "tail point agreement with the targets is undecidable");
}

}  // namespace infprod
