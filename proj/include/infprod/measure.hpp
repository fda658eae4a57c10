#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "infprod/interval.hpp"
#include "infprod/space.hpp"

namespace infprod {

/// Probability vectors must sum to one within this tolerance on construction.
inline constexpr double kProbabilityTolerance = 1e-12;

class CoordinateMeasure {
 public:
  /// Rejects negative weights and sums outside 1 ± kProbabilityTolerance;
  /// inputs are never renormalized.
  explicit CoordinateMeasure(std::vector<double> weights);

  static CoordinateMeasure dirac(std::size_t size, Symbol s);
  static CoordinateMeasure uniform(std::size_t size);
  /// Binary measure with weight `p_one` on symbol 1.
  static CoordinateMeasure bernoulli(double p_one);

  std::size_t size() const { return weights_.size(); }
  double weight(Symbol s) const { return weights_.at(s); }
  std::span<const double> weights() const { return weights_; }
  std::optional<Symbol> dirac_symbol() const;

  /// Inverse-CDF draw from a uniform in [0, 1); zero-weight symbols are never returned.
  Symbol draw(double u) const;

  friend bool operator==(const CoordinateMeasure&, const CoordinateMeasure&) = default;

 private:
  std::vector<double> weights_;
};

/// A registered closed-form family of coordinate measures, defined on the
/// tail template space. Besides the per-coordinate measure it answers the
/// infinite-tail queries that the exact oracles need.
class MeasureFormula {
 public:
  virtual ~MeasureFormula() = default;

  virtual std::string id() const = 0;
  virtual std::map<std::string, double> params() const = 0;
  virtual CoordinateMeasure at(Index i) const = 0;
  /// Enclosure of sigma_i({s}) for the exact (not double-rounded) formula.
  virtual Interval weight(Index i, Symbol s) const = 0;

  /// prod_{i >= first} sigma_i(target_i); nullopt when no closed form is known.
  virtual std::optional<Interval> target_product(Index first, const SymbolRule& target) const = 0;
  /// sum_{i >= first} scale * ratio^i * E_{sigma_i}[score].
  virtual std::optional<Interval> discounted_score(Index first, std::span<const double> score,
                                                   double scale, double ratio) const = 0;
  /// Upper bound on sum_{i >= first} sigma_i(not target_i); +inf when divergent.
  virtual double miss_mass(Index first, const SymbolRule& target) const = 0;
  /// sup_{i >= first} max_s sigma_i({s}).
  virtual double sup_max_weight(Index first) const = 0;
};

/// Builds a registered formula family; throws Validation for unknown ids.
std::shared_ptr<const MeasureFormula> make_formula(const std::string& id,
                                                   const std::map<std::string, double>& params,
                                                   const CoordinateSpace& tail_space);
std::vector<std::string> registered_formulas();

/// sigma_i({one}) = 1 - base^{-i}, the remaining mass on the other symbol.
std::shared_ptr<const MeasureFormula> geometric_bernoulli(double base = 2.0, Symbol one = 1);

struct ConstantMeasure {
  CoordinateMeasure measure;
};
/// Coordinate i uses cycle[(i - 1) % period].
struct PeriodicMeasures {
  std::vector<CoordinateMeasure> cycle;
};
struct FormulaFamily {
  std::shared_ptr<const MeasureFormula> formula;
};
using MeasureTail = std::variant<ConstantMeasure, PeriodicMeasures, FormulaFamily>;

class ProductMeasure {
 public:
  /// The head must cover every explicit space of the family.
  ProductMeasure(SpacesPtr spaces, std::vector<CoordinateMeasure> head, MeasureTail tail);

  /// Same measure on every coordinate of a uniform family.
  static ProductMeasure iid(SpacesPtr spaces, CoordinateMeasure m);

  const SpacesPtr& spaces() const { return spaces_; }
  const std::vector<CoordinateMeasure>& head() const { return head_; }
  const MeasureTail& tail() const { return tail_; }

  CoordinateMeasure resolve(Index i) const;
  /// Enclosure of sigma_i({s}); exact formula weights for formula tails.
  Interval weight(Index i, Symbol s) const;

  std::optional<Interval> tail_target_product(Index first, const SymbolRule& target) const;
  std::optional<Interval> tail_discounted_score(Index first, std::span<const double> score,
                                                double scale, double ratio) const;
  double tail_miss_mass(Index first, const SymbolRule& target) const;
  double tail_sup_max_weight(Index first) const;

 private:
  SpacesPtr spaces_;
  std::vector<CoordinateMeasure> head_;
  MeasureTail tail_;
};

/// The operation name used throughout the docs.
inline CoordinateMeasure resolve_coordinate_measure(const ProductMeasure& sigma, Index i) {
  return sigma.resolve(i);
}

}  // namespace infprod
