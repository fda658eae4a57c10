#pragma once

#include <variant>
#include <vector>

#include "infprod/measure.hpp"
#include "infprod/point.hpp"

namespace infprod {

/// Per-coordinate assignment below the switch index: integrate against a
/// measure or pin the coordinate to a symbol.
using Assignment = std::variant<CoordinateMeasure, Symbol>;

/// tau_1 (x) ... (x) tau_{n-1} (x) x_n (x) x_{n+1} (x) ...: explicit
/// assignments for coordinates below the switch index n, Dirac on the tail
/// point from n on.
class HybridMeasure {
 public:
  /// Empty placeholder; only assignment and destruction are meaningful.
  HybridMeasure() = default;
  HybridMeasure(std::vector<Assignment> head, PointSpec tail_point);

  static HybridMeasure dirac(PointSpec x) { return HybridMeasure({}, std::move(x)); }
  /// sigma_1 (x) ... (x) sigma_{n-1} (x) x_n (x) ...; n = 1 is Dirac(x).
  static HybridMeasure switch_at(const ProductMeasure& sigma, const PointSpec& x, Index n);

  const SpacesPtr& spaces() const { return point_.spaces(); }
  Index switch_index() const { return head_.size() + 1; }
  const std::vector<Assignment>& head() const { return head_; }
  const PointSpec& tail_point() const { return point_; }

  /// Assignment at any coordinate; indices >= switch_index are Dirac.
  Assignment at(Index i) const;

 private:
  std::vector<Assignment> head_;
  PointSpec point_;
};

}  // namespace infprod
