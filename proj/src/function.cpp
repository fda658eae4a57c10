#include "infprod/function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "infprod/error.hpp"

namespace infprod {

namespace {

std::optional<Symbol> fixed_at(const Pattern& p, Index i) {
  if (i <= p.head.size()) {
    const auto v = p.head[i - 1];
    if (v == Pattern::kFree) return std::nullopt;
    return static_cast<Symbol>(v);
  }
  if (p.tail_point && p.tail_point->known(i, p.horizon)) return p.tail_point->at(i);
  return std::nullopt;
}

double label_value(const std::string& label, Index i) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(label, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != label.size()) {
    throw Error(ErrorKind::Validation, "coordinate " + std::to_string(i) + ": label '" + label +
                                           "' has no numeric value");
  }
  return v;
}

// --- Cylinder --------------------------------------------------------------

void cylinder_scan(const Cylinder& c, const Pattern& p, Index i, std::size_t offset, double& lo,
                   double& hi) {
  if (i > c.depth) {
    lo = std::min(lo, c.table[offset]);
    hi = std::max(hi, c.table[offset]);
    return;
  }
  const std::size_t base = offset * c.radix[i - 1];
  if (const auto s = fixed_at(p, i)) {
    cylinder_scan(c, p, i + 1, base + *s, lo, hi);
    return;
  }
  for (std::size_t s = 0; s < c.radix[i - 1]; ++s) cylinder_scan(c, p, i + 1, base + s, lo, hi);
}

Interval cylinder_bounds(const Cylinder& c, const Pattern& p) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  cylinder_scan(c, p, 1, 0, lo, hi);
  return {lo, hi};
}

// --- DiscountedSum -----------------------------------------------------------

double score_at(const DiscountedSum& d, Index i, Symbol s) {
  return i <= d.head_scores.size() ? d.head_scores[i - 1][s] : d.tail_scores[s];
}

Interval score_range(std::span<const double> scores) {
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  return {*lo, *hi};
}

// Sum over coordinates i >= from only.
Interval discounted_bounds(const DiscountedSum& d, const Pattern& p, Index from = 1) {
  const PointSpec* x = p.tail_point;
  Index last = std::max(p.head.size(), d.head_scores.size());
  if (x && x->is_described()) last = std::max(last, x->head().size());
  if (x && x->is_lazy()) last = std::max({last, p.horizon, x->explicit_length()});

  const Interval q{d.ratio};
  last = std::max(last, from - 1);
  Interval w = Interval(d.scale) * pow(q, from);
  Interval acc{0.0};
  for (Index i = from; i <= last; ++i) {
    if (const auto s = fixed_at(p, i)) {
      acc += w * Interval(score_at(d, i, *s));
    } else {
      acc += w * score_range(i <= d.head_scores.size() ? std::span<const double>(d.head_scores[i - 1])
                                                        : std::span<const double>(d.tail_scores));
    }
    w *= q;
  }

  if (x && x->is_described()) {
    // Periodic remainder: sum_{j} score(rule_j) * c q^j / (1 - q^P).
    const SymbolRule& rule = x->tail_rule();
    const std::size_t period = rule_period(rule);
    Interval cycle{0.0};
    for (Index j = last + 1; j <= last + period; ++j) {
      cycle += w * Interval(d.tail_scores[rule_symbol(rule, j)]);
      w *= q;
    }
    return acc + cycle / (Interval(1.0) - pow(q, period));
  }
  return acc + discounted_tail_weight(d.scale, d.ratio, last) * score_range(d.tail_scores);
}

// --- ProductIndicator --------------------------------------------------------

Interval indicator_bounds(const ProductIndicator& f, const SpaceFamily& spaces, const Pattern& p) {
  bool can_miss = false;
  for (Index i = 1; i <= p.head.size(); ++i) {
    if (const auto s = fixed_at(p, i)) {
      if (*s != f.targets.at(i)) return Interval(0.0);
    } else if (spaces.at(i).size() > 1) {
      can_miss = true;
    }
  }
  const double lower = can_miss ? 0.0 : 1.0;
  if (!p.tail_point) {
    return {spaces.frozen_from(p.head.size() + 1) ? lower : 0.0, 1.0};
  }
  switch (compare_from(*p.tail_point, f.targets, p.head.size() + 1, p.horizon)) {
    case Agreement::Disagree: return Interval(0.0);
    case Agreement::Agree: return {lower, 1.0};
    case Agreement::Unknown: break;
  }
  return {0.0, 1.0};
}

}  // namespace

Pattern Pattern::cylinder(std::span<const Symbol> prefix) {
  Pattern p;
  p.head.assign(prefix.begin(), prefix.end());
  return p;
}

Pattern Pattern::at_point(const PointSpec& x, Index horizon) {
  Pattern p;
  p.tail_point = &x;
  p.horizon = horizon;
  return p;
}

TailFunction::TailFunction(SpacesPtr spaces, std::variant<Cylinder, DiscountedSum, ProductIndicator> family)
    : spaces_(std::move(spaces)), family_(std::move(family)) {
  range_ = bounds(Pattern{});
}

TailFunction TailFunction::cylinder(SpacesPtr spaces, std::size_t depth, std::vector<double> table) {
  if (!spaces) throw Error(ErrorKind::InvalidArgument, "function without spaces");
  Cylinder c;
  c.depth = depth;
  std::size_t cells = 1;
  for (Index i = 1; i <= depth; ++i) {
    c.radix.push_back(spaces->at(i).size());
    cells *= c.radix.back();
  }
  if (table.size() != cells) {
    throw Error(ErrorKind::Validation, "cylinder table has " + std::to_string(table.size()) +
                                           " entries, expected " + std::to_string(cells));
  }
  for (double v : table) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Validation, "cylinder table entry is not finite");
  }
  c.table = std::move(table);
  return TailFunction(std::move(spaces), std::move(c));
}

TailFunction TailFunction::constant(SpacesPtr spaces, double c) {
  return cylinder(std::move(spaces), 0, {c});
}

TailFunction TailFunction::linear(SpacesPtr spaces, std::vector<double> coefficients, double constant) {
  if (!spaces) throw Error(ErrorKind::InvalidArgument, "function without spaces");
  const std::size_t depth = coefficients.size();
  std::vector<double> table{constant};
  for (Index i = 1; i <= depth; ++i) {
    const CoordinateSpace& space = spaces->at(i);
    std::vector<double> next;
    next.reserve(table.size() * space.size());
    for (double v : table) {
      for (Symbol s = 0; s < space.size(); ++s) {
        next.push_back(v + coefficients[i - 1] * label_value(space.label(s), i));
      }
    }
    table = std::move(next);
  }
  return cylinder(std::move(spaces), depth, std::move(table));
}

TailFunction TailFunction::discounted_sum(SpacesPtr spaces, const std::map<std::string, double>& scores,
                                          double scale, double ratio) {
  if (!spaces) throw Error(ErrorKind::InvalidArgument, "function without spaces");
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorKind::Validation, "discounted sum needs a finite scale >= 0");
  }
  if (!(ratio >= 0.0 && ratio < 1.0)) throw Error(ErrorKind::Validation, "discounted sum needs 0 <= ratio < 1");
  auto table_for = [&](const CoordinateSpace& space) {
    std::vector<double> out;
    for (const auto& label : space.labels()) {
      const auto it = scores.find(label);
      out.push_back(it == scores.end() ? 0.0 : it->second);
    }
    return out;
  };
  DiscountedSum d;
  d.scale = scale;
  d.ratio = ratio;
  for (const auto& space : spaces->head()) d.head_scores.push_back(table_for(space));
  d.tail_scores = table_for(spaces->tail());
  return TailFunction(std::move(spaces), std::move(d));
}

TailFunction TailFunction::product_indicator(PointSpec targets) {
  if (!targets.is_described()) throw Error(ErrorKind::Validation, "indicator targets must be described");
  SpacesPtr spaces = targets.spaces();
  return TailFunction(std::move(spaces), ProductIndicator{std::move(targets)});
}

FunctionFamily TailFunction::family() const {
  switch (family_.index()) {
    case 0: return FunctionFamily::Cylinder;
    case 1: return FunctionFamily::DiscountedSum;
    default: return FunctionFamily::ProductIndicator;
  }
}

Interval TailFunction::bounds(const Pattern& pattern) const {
  return std::visit(
      [&](const auto& fam) -> Interval {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, Cylinder>) {
          return cylinder_bounds(fam, pattern);
        } else if constexpr (std::is_same_v<T, DiscountedSum>) {
          return discounted_bounds(fam, pattern);
        } else {
          return indicator_bounds(fam, *spaces_, pattern);
        }
      },
      family_);
}

TailFunction operator+(const TailFunction& f, const TailFunction& g) {
  const Cylinder* a = f.as_cylinder();
  const Cylinder* b = g.as_cylinder();
  if (!a || !b || a->depth != b->depth || a->radix != b->radix) {
    throw Error(ErrorKind::InvalidArgument, "only cylinders of equal depth and shape can be added");
  }
  std::vector<double> table(a->table.size());
  for (std::size_t k = 0; k < table.size(); ++k) table[k] = a->table[k] + b->table[k];
  return TailFunction::cylinder(f.spaces(), a->depth, std::move(table));
}

std::string_view to_string(FunctionFamily family) {
  switch (family) {
    case FunctionFamily::Cylinder: return "cylinder";
    case FunctionFamily::DiscountedSum: return "discounted-sum";
    case FunctionFamily::ProductIndicator: return "product-indicator";
  }
  return "unknown";
}

Interval eval_function(const TailFunction& f, const PointSpec& x, Index horizon) {
  if (horizon == 0) throw Error(ErrorKind::InvalidArgument, "evaluation horizon must be >= 1");
  return f.bounds(Pattern::at_point(x, horizon));
}

double osc_bound(const TailFunction& f, std::span<const Symbol> prefix) {
  const Interval b = f.bounds(Pattern::cylinder(prefix));
  return b.hi - b.lo;
}

Interval discounted_value_from(const TailFunction& f, const PointSpec& x, Index from, Index horizon) {
  const DiscountedSum* d = f.as_discounted();
  if (!d) throw Error(ErrorKind::InvalidArgument, "not a discounted sum");
  return discounted_bounds(*d, Pattern::at_point(x, horizon), std::max<Index>(from, 1));
}

Interval discounted_tail_weight(double scale, double ratio, Index last) {
  const Interval q{ratio};
  return Interval(scale) * pow(q, last + 1) / (Interval(1.0) - q);
}

}  // namespace infprod
