#include "infprod/point.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <shared_mutex>

#include "infprod/error.hpp"
#include "infprod/rng.hpp"

namespace infprod {

namespace detail {

// Write-once memo of realized coordinates, shared by copies of a lazy point.
// A realized value is a pure function of (seed, i), so a racing double write
// stores the same symbol.
struct LazyCache {
  mutable std::shared_mutex mutex;
  std::vector<std::int64_t> realized;  // -1 = not yet drawn
};

}  // namespace detail

namespace {

void check_symbol(const SpaceFamily& spaces, Index i, Symbol s) {
  if (s >= spaces.at(i).size()) {
    throw Error(ErrorKind::Validation, "coordinate " + std::to_string(i) + ": symbol index " +
                                           std::to_string(s) + " outside its space");
  }
}

void check_rule(const SpaceFamily& spaces, const SymbolRule& rule) {
  const std::size_t n = spaces.tail().size();
  if (const auto* p = std::get_if<PeriodicSymbols>(&rule)) {
    if (p->cycle.empty()) throw Error(ErrorKind::Validation, "empty periodic symbol tail");
    for (Symbol s : p->cycle) {
      if (s >= n) throw Error(ErrorKind::Validation, "tail symbol outside the tail space");
    }
  } else if (std::get<ConstantSymbol>(rule).symbol >= n) {
    throw Error(ErrorKind::Validation, "tail symbol outside the tail space");
  }
}

}  // namespace

PointSpec PointSpec::described(SpacesPtr spaces, std::vector<Symbol> head, SymbolRule tail) {
  if (!spaces) throw Error(ErrorKind::InvalidArgument, "point without spaces");
  check_rule(*spaces, tail);
  for (Index i = 1; i <= head.size(); ++i) check_symbol(*spaces, i, head[i - 1]);
  // Coordinates still inside the explicit spaces get the rule's symbol by label.
  for (Index i = head.size() + 1; i <= spaces->head_size(); ++i) {
    const std::string& label = spaces->tail().label(rule_symbol(tail, i));
    const auto s = spaces->at(i).find(label);
    if (!s) {
      throw Error(ErrorKind::Validation, "coordinate " + std::to_string(i) + ": tail symbol '" + label +
                                             "' is not in its space");
    }
    head.push_back(*s);
  }
  PointSpec p;
  p.spaces_ = std::move(spaces);
  p.head_ = std::move(head);
  p.rule_ = std::move(tail);
  return p;
}

PointSpec PointSpec::lazy(std::shared_ptr<const ProductMeasure> measure, std::uint64_t seed) {
  if (!measure) throw Error(ErrorKind::InvalidArgument, "lazy point without a measure");
  PointSpec p;
  p.spaces_ = measure->spaces();
  p.measure_ = std::move(measure);
  p.seed_ = seed;
  p.lazy_ = std::make_shared<detail::LazyCache>();
  return p;
}

Symbol PointSpec::at(Index i) const {
  if (i == 0) throw Error(ErrorKind::InvalidArgument, "coordinates are 1-based");
  if (!lazy_) return i <= head_.size() ? head_[i - 1] : rule_symbol(rule_, i);

  if (const auto it = overrides_.find(i); it != overrides_.end()) return it->second;
  {
    std::shared_lock lock(lazy_->mutex);
    if (i <= lazy_->realized.size() && lazy_->realized[i - 1] >= 0) {
      return static_cast<Symbol>(lazy_->realized[i - 1]);
    }
  }
  const Symbol s = measure_->resolve(i).draw(rng::coordinate_uniform(seed_, i));
  std::unique_lock lock(lazy_->mutex);
  if (lazy_->realized.size() < i) lazy_->realized.resize(i, -1);
  lazy_->realized[i - 1] = s;
  return s;
}

std::vector<Symbol> PointSpec::prefix(Index n) const {
  std::vector<Symbol> out;
  out.reserve(n);
  for (Index i = 1; i <= n; ++i) out.push_back(at(i));
  return out;
}

bool PointSpec::known(Index i, Index horizon) const {
  return !lazy_ || i <= horizon || overrides_.count(i) > 0;
}

PointSpec PointSpec::with(Index i, Symbol s) const {
  if (i == 0) throw Error(ErrorKind::InvalidArgument, "coordinates are 1-based");
  check_symbol(*spaces_, i, s);
  PointSpec p = *this;
  if (lazy_) {
    p.overrides_[i] = s;
    return p;
  }
  while (p.head_.size() < i) p.head_.push_back(rule_symbol(rule_, p.head_.size() + 1));
  p.head_[i - 1] = s;
  return p;
}

PointSpec PointSpec::with_prefix(std::span<const Symbol> prefix) const {
  PointSpec p = *this;
  for (Index i = 1; i <= prefix.size(); ++i) p = p.with(i, prefix[i - 1]);
  return p;
}

Index PointSpec::explicit_length() const {
  if (!lazy_) return head_.size();
  return overrides_.empty() ? 0 : overrides_.rbegin()->first;
}

Agreement compare_from(const PointSpec& x, const PointSpec& reference, Index from, Index horizon) {
  if (!reference.is_described()) {
    throw Error(ErrorKind::InvalidArgument, "comparison reference must be a described point");
  }
  from = std::max<Index>(from, 1);
  if (x.is_described()) {
    const Index last = std::max({x.head().size(), reference.head().size(), from - 1});
    for (Index i = from; i <= last; ++i) {
      if (x.at(i) != reference.at(i)) return Agreement::Disagree;
    }
    const std::size_t period = std::lcm(rule_period(x.tail_rule()), rule_period(reference.tail_rule()));
    for (Index i = last + 1; i <= last + period; ++i) {
      if (rule_symbol(x.tail_rule(), i) != rule_symbol(reference.tail_rule(), i)) return Agreement::Disagree;
    }
    return Agreement::Agree;
  }

  for (Index i = from; i <= horizon; ++i) {
    if (x.at(i) != reference.at(i)) return Agreement::Disagree;
  }
  for (const auto& [i, s] : x.overrides()) {
    if (i >= from && s != reference.at(i)) return Agreement::Disagree;
  }
  // Past its explicit head the sampling measure may force the reference
  // symbols outright (zero-weight symbols are never drawn).
  const ProductMeasure& m = *x.measure();
  const Index scan_to = std::max({m.head().size(), reference.head().size(), horizon, x.explicit_length()});
  if (m.tail_miss_mass(scan_to + 1, reference.tail_rule()) != 0.0) return Agreement::Unknown;
  for (Index i = std::max(from, horizon + 1); i <= scan_to; ++i) {
    if (x.at(i) != reference.at(i)) return Agreement::Disagree;
  }
  return Agreement::Agree;
}

PointSpec close_point(const PointSpec& x, Index horizon, const PointSpec& tail_source) {
  if (x.is_described()) return x;
  if (!tail_source.is_described()) {
    throw Error(ErrorKind::InvalidArgument, "closing tail must be a described point");
  }
  std::vector<Symbol> head = x.prefix(horizon);
  for (Index i = horizon + 1; i <= tail_source.head().size(); ++i) head.push_back(tail_source.at(i));
  PointSpec closed = PointSpec::described(x.spaces(), std::move(head), tail_source.tail_rule());
  for (const auto& [i, s] : x.overrides()) {
    if (i > horizon) closed = closed.with(i, s);
  }
  return closed;
}

}  // namespace infprod
