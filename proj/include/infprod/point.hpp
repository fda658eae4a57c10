#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "infprod/measure.hpp"
#include "infprod/space.hpp"

namespace infprod {

namespace detail {
struct LazyCache;
}

/// A point of the product space: either an explicit head followed by a
/// periodic/constant symbol rule, or a lazily sampled point whose coordinate
/// i is a pure function of (seed, i) drawn from the sampling measure.
class PointSpec {
 public:
  /// Empty placeholder; only assignment and destruction are meaningful.
  PointSpec() = default;

  /// Head symbols index into each coordinate's own space; the rule indexes
  /// the tail template. Heads shorter than the family's explicit spaces are
  /// extended from the rule by label.
  static PointSpec described(SpacesPtr spaces, std::vector<Symbol> head, SymbolRule tail);
  static PointSpec constant(SpacesPtr spaces, Symbol s) {
    return described(std::move(spaces), {}, ConstantSymbol{s});
  }
  static PointSpec lazy(std::shared_ptr<const ProductMeasure> measure, std::uint64_t seed);

  bool is_described() const { return !lazy_; }
  bool is_lazy() const { return static_cast<bool>(lazy_); }
  const SpacesPtr& spaces() const { return spaces_; }

  /// Coordinate i (i >= 1); lazy coordinates are realized on first use and
  /// never change afterwards.
  Symbol at(Index i) const;
  std::vector<Symbol> prefix(Index n) const;

  /// Whether coordinate i is available without trusting realization beyond
  /// `horizon`: always for described points, i <= horizon or overridden for lazy ones.
  bool known(Index i, Index horizon) const;

  /// Copy with coordinate i replaced.
  PointSpec with(Index i, Symbol s) const;
  /// Copy with coordinates 1..prefix.size() replaced.
  PointSpec with_prefix(std::span<const Symbol> prefix) const;

  // Described points.
  const std::vector<Symbol>& head() const { return head_; }
  const SymbolRule& tail_rule() const { return rule_; }

  // Lazy points.
  std::uint64_t seed() const { return seed_; }
  const std::shared_ptr<const ProductMeasure>& measure() const { return measure_; }
  const std::map<Index, Symbol>& overrides() const { return overrides_; }
  /// Largest coordinate index that differs from the underlying rule or stream.
  Index explicit_length() const;

 private:

  SpacesPtr spaces_;
  std::vector<Symbol> head_;
  SymbolRule rule_;

  std::shared_ptr<const ProductMeasure> measure_;
  std::uint64_t seed_ = 0;
  std::map<Index, Symbol> overrides_;
  std::shared_ptr<detail::LazyCache> lazy_;
};

inline Symbol point_coordinate(const PointSpec& x, Index i) { return x.at(i); }

enum class Agreement { Agree, Disagree, Unknown };

/// Compares a point with a described reference on coordinates >= from.
/// Lazy points are inspected only where `known(i, horizon)`; if those agree
/// the verdict is Unknown.
Agreement compare_from(const PointSpec& x, const PointSpec& reference, Index from, Index horizon);

/// Described point equal to x on 1..horizon and to the described
/// `tail_source` beyond it.
PointSpec close_point(const PointSpec& x, Index horizon, const PointSpec& tail_source);

}  // namespace infprod
