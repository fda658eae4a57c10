#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "infprod/interval.hpp"
#include "infprod/point.hpp"

namespace infprod {

/// A partially pinned point: coordinates 1..head.size() are either fixed to a
/// symbol or free (kFree); coordinates beyond are free when `tail_point` is
/// null, otherwise taken from the point (lazy coordinates only up to
/// `horizon`, free past it).
struct Pattern {
  static constexpr std::int64_t kFree = -1;

  std::vector<std::int64_t> head;
  const PointSpec* tail_point = nullptr;
  Index horizon = 64;

  /// Prefix fixed, tail free.
  static Pattern cylinder(std::span<const Symbol> prefix);
  /// Every coordinate taken from x.
  static Pattern at_point(const PointSpec& x, Index horizon);
};

struct Cylinder {
  std::size_t depth = 0;
  /// Row-major over coordinates 1..depth, coordinate 1 most significant.
  std::vector<double> table;
  std::vector<std::size_t> radix;
};

/// f(x) = sum_i scale * ratio^i * score_i(x_i) with 0 <= ratio < 1, scale >= 0.
struct DiscountedSum {
  double scale = 1.0;
  double ratio = 0.5;
  std::vector<std::vector<double>> head_scores;  // per explicit space
  std::vector<double> tail_scores;               // tail template
};

/// f(x) = 1 when x_i equals the target at every coordinate, else 0.
struct ProductIndicator {
  PointSpec targets;
};

enum class FunctionFamily { Cylinder, DiscountedSum, ProductIndicator };

class TailFunction {
 public:
  /// `table` has prod_{i<=depth} |X_i| entries.
  static TailFunction cylinder(SpacesPtr spaces, std::size_t depth, std::vector<double> table);
  static TailFunction constant(SpacesPtr spaces, double c);
  /// constant + sum_k coefficients[k] * value(x_{k+1}), where value() parses the
  /// symbol label as a number.
  static TailFunction linear(SpacesPtr spaces, std::vector<double> coefficients, double constant = 0.0);
  /// Scores are keyed by symbol label; missing labels score 0.
  static TailFunction discounted_sum(SpacesPtr spaces, const std::map<std::string, double>& scores,
                                     double scale, double ratio);
  static TailFunction product_indicator(PointSpec targets);

  const SpacesPtr& spaces() const { return spaces_; }
  FunctionFamily family() const;
  const Cylinder* as_cylinder() const { return std::get_if<Cylinder>(&family_); }
  const DiscountedSum* as_discounted() const { return std::get_if<DiscountedSum>(&family_); }
  const ProductIndicator* as_indicator() const { return std::get_if<ProductIndicator>(&family_); }

  /// Global bound [inf f, sup f].
  Interval range() const { return range_; }

  /// Sound enclosure of { f(y) : y matches the pattern }.
  Interval bounds(const Pattern& pattern) const;

  /// Cylinder sums by table addition; both operands need equal depth.
  friend TailFunction operator+(const TailFunction& f, const TailFunction& g);

 private:
  TailFunction(SpacesPtr spaces, std::variant<Cylinder, DiscountedSum, ProductIndicator> family);

  SpacesPtr spaces_;
  std::variant<Cylinder, DiscountedSum, ProductIndicator> family_;
  Interval range_;
};

std::string_view to_string(FunctionFamily family);

/// f(x) using coordinates 1..horizon of x; exact (a point interval) whenever
/// those coordinates, or the described tail of x, determine the value.
Interval eval_function(const TailFunction& f, const PointSpec& x, Index horizon);

/// Upper bound on sup f - inf f over the cylinder of `prefix`.
double osc_bound(const TailFunction& f, std::span<const Symbol> prefix);

/// sum_{i >= from} scale * ratio^i * score(x_i) for a DiscountedSum f.
Interval discounted_value_from(const TailFunction& f, const PointSpec& x, Index from, Index horizon);

/// sum_{i > last} scale * ratio^i.
Interval discounted_tail_weight(double scale, double ratio, Index last);

}  // namespace infprod
